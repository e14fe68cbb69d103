#pragma once

// Problem files (JSON) and solution files (CSV) for the command-line tool.

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "refrec/boundary.hpp"
#include "refrec/errors.hpp"
#include "refrec/laurent.hpp"
#include "refrec/reflection.hpp"
#include "refrec/system_green.hpp"

namespace refrec::cli {

using json = nlohmann::json;

enum class Kind { ScalarReflection, Scalar, System };

inline std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::ScalarReflection: return "scalar-reflection";
    case Kind::Scalar: return "scalar";
    case Kind::System: return "system";
  }
  return "?";
}

/// Fields that do not depend on the scalar field.
struct Header {
  std::string field = "rational";
  Kind kind = Kind::Scalar;
  Window window;
  Tolerance tol;
};

template <Field F>
struct Problem {
  Header header;
  ReflectionOperator<F> L;           // scalar-reflection
  std::vector<F> coeffs;             // scalar: a_0..a_n
  MatrixFG<F> system;                // system
  Sequence<F> rhs;                   // scalar kinds
  VectorSequence<F> rhs_vec;         // system
  std::vector<BoundaryFunctional<F>> W;
  Vector<F> h;
  std::optional<SystemBoundary<F>> Wsys;
  Vector<F> hsys;
};

[[noreturn]] inline void parse_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ParseError, path + ": " + what);
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) parse_fail(path, std::string("missing field '") + key + "'");
  return obj.at(key);
}

inline Index parse_index(const json& v, const std::string& path) {
  if (!v.is_number_integer()) parse_fail(path, "expected an integer index");
  return v.get<Index>();
}

template <Field F>
F parse_scalar(const json& v, const std::string& path) {
  if constexpr (std::is_same_v<F, Rational>) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) {
      try {
        return Rational::parse(v.get<std::string>());
      } catch (const Error& e) {
        parse_fail(path, e.detail());
      }
    }
    parse_fail(path, "expected a rational as an integer or a \"p/q\" string");
  } else {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      return {v[0].get<double>(), v[1].get<double>()};
    }
    if (v.is_string()) {
      try {
        return parse_complex(v.get<std::string>());
      } catch (const Error& e) {
        parse_fail(path, e.detail());
      }
    }
    parse_fail(path, "expected a complex number as [re, im] or a number");
  }
}

template <Field F>
LaurentPoly<F> parse_laurent(const json& v, const std::string& path) {
  if (!v.is_array()) parse_fail(path, "expected a list of [exponent, coefficient] pairs");
  std::vector<std::pair<Index, F>> terms;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != 2) parse_fail(p, "expected [exponent, coefficient]");
    terms.emplace_back(parse_index(v[i][0], p + "[0]"), parse_scalar<F>(v[i][1], p + "[1]"));
  }
  return LaurentPoly<F>::from_terms(terms);
}

template <Field F>
Matrix<F> parse_matrix(const json& v, const std::string& path, std::size_t n = 0) {
  if (!v.is_array() || v.empty()) parse_fail(path, "expected a non-empty matrix (list of rows)");
  const std::size_t rows = v.size();
  if (n != 0 && rows != n) parse_fail(path, "expected " + std::to_string(n) + " rows");
  Matrix<F> m(rows, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != rows) parse_fail(path, "matrix must be square");
    for (std::size_t j = 0; j < rows; ++j)
      m(i, j) = parse_scalar<F>(v[i][j], path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  return m;
}

template <Field F>
Vector<F> parse_vector(const json& v, const std::string& path, std::size_t n) {
  if (!v.is_array() || v.size() != n) parse_fail(path, "expected a vector of length " + std::to_string(n));
  Vector<F> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = parse_scalar<F>(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

inline Window parse_window_text(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) parse_fail("--window", "expected KMIN:KMAX");
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    const Index lo = std::stoll(a, &p1), hi = std::stoll(b, &p2);
    if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing");
    if (hi < lo) parse_fail("--window", "KMAX < KMIN");
    return {lo, hi};
  } catch (const std::logic_error&) {
    parse_fail("--window", "expected KMIN:KMAX with integers");
  }
}

inline Header parse_header(const json& doc) {
  Header h;
  if (!doc.is_object()) parse_fail("<root>", "expected a JSON object");
  if (doc.contains("field")) {
    const auto& f = doc.at("field");
    if (!f.is_string() || (f != "rational" && f != "complex")) parse_fail("field", "expected rational or complex");
    h.field = f.get<std::string>();
  }
  const auto& kind = require(doc, "kind", "<root>");
  if (kind == "scalar-reflection") {
    h.kind = Kind::ScalarReflection;
  } else if (kind == "scalar") {
    h.kind = Kind::Scalar;
  } else if (kind == "system") {
    h.kind = Kind::System;
  } else {
    parse_fail("kind", "expected scalar-reflection, scalar or system");
  }
  if (doc.contains("window")) {
    const auto& w = doc.at("window");
    if (!w.is_array() || w.size() != 2) parse_fail("window", "expected [kmin, kmax]");
    const Index lo = parse_index(w[0], "window[0]"), hi = parse_index(w[1], "window[1]");
    if (hi < lo) parse_fail("window", "kmax < kmin");
    h.window = {lo, hi};
  }
  if (doc.contains("tolerance")) {
    if (!doc.at("tolerance").is_number() || doc.at("tolerance").get<double>() <= 0) {
      parse_fail("tolerance", "expected a positive number");
    }
    h.tol.eps = doc.at("tolerance").get<double>();
  }
  return h;
}

template <Field F>
BoundaryFunctional<F> parse_condition_terms(const json& terms, const std::string& path) {
  if (!terms.is_array()) parse_fail(path, "expected a list of [coefficient, index] or [coefficient, index, operator]");
  std::vector<typename BoundaryFunctional<F>::Term> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const auto& t = terms[i];
    if (!t.is_array() || (t.size() != 2 && t.size() != 3)) parse_fail(p, "expected [coefficient, index(, operator)]");
    std::optional<ReflectionOperator<F>> pre;
    if (t.size() == 3) {
      const auto& op = t[2];
      LaurentPoly<F> P, Q;
      if (op.contains("P")) P = parse_laurent<F>(op.at("P"), p + ".P");
      if (op.contains("Q")) Q = parse_laurent<F>(op.at("Q"), p + ".Q");
      pre = ReflectionOperator<F>(P, Q);
    }
    out.push_back({parse_scalar<F>(t[0], p + "[0]"), parse_index(t[1], p + "[1]"), pre});
  }
  return BoundaryFunctional<F>(std::move(out));
}

template <Field F>
Problem<F> parse_problem(const json& doc, const Header& header) {
  Problem<F> pr;
  pr.header = header;
  const auto& op = require(doc, "operator", "<root>");
  const bool reflection_kind = header.kind != Kind::Scalar;
  if (reflection_kind && header.window.lo != -header.window.hi) {
    parse_fail("window", "reflection problems need a symmetric window [-N, N]");
  }
  switch (header.kind) {
    case Kind::ScalarReflection: {
      LaurentPoly<F> P, Q;
      if (op.contains("P")) P = parse_laurent<F>(op.at("P"), "operator.P");
      if (op.contains("Q")) Q = parse_laurent<F>(op.at("Q"), "operator.Q");
      pr.L = ReflectionOperator<F>(P, Q);
      break;
    }
    case Kind::Scalar: {
      const auto& a = require(op, "coeffs", "operator");
      if (!a.is_array() || a.size() < 2) parse_fail("operator.coeffs", "expected [a0, ..., an] with n >= 1");
      for (std::size_t i = 0; i < a.size(); ++i)
        pr.coeffs.push_back(parse_scalar<F>(a[i], "operator.coeffs[" + std::to_string(i) + "]"));
      if (is_exact_zero(pr.coeffs.front()) || is_exact_zero(pr.coeffs.back())) {
        parse_fail("operator.coeffs", "a0 and an must be nonzero");
      }
      break;
    }
    case Kind::System: {
      pr.system.f = parse_matrix<F>(require(op, "F", "operator"), "operator.F");
      const std::size_t n = pr.system.f.rows();
      pr.system.g = parse_matrix<F>(require(op, "G", "operator"), "operator.G", n);
      pr.system.a = parse_matrix<F>(require(op, "A", "operator"), "operator.A", n);
      pr.system.b = parse_matrix<F>(require(op, "B", "operator"), "operator.B", n);
      break;
    }
  }

  const std::size_t n = header.kind == Kind::System ? pr.system.dim() : 1;
  std::vector<typename Sequence<F>::Entry> rhs;
  std::vector<typename VectorSequence<F>::Entry> rhs_vec;
  if (doc.contains("rhs")) {
    const auto& r = doc.at("rhs");
    if (!r.is_array()) parse_fail("rhs", "expected a list of [index, value] pairs");
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string p = "rhs[" + std::to_string(i) + "]";
      if (!r[i].is_array() || r[i].size() != 2) parse_fail(p, "expected [index, value]");
      const Index k = parse_index(r[i][0], p + "[0]");
      if (header.kind == Kind::System) {
        rhs_vec.emplace_back(k, parse_vector<F>(r[i][1], p + "[1]", n));
      } else {
        rhs.emplace_back(k, parse_scalar<F>(r[i][1], p + "[1]"));
      }
    }
  }
  try {
    pr.rhs = Sequence<F>::finite(std::move(rhs));
    pr.rhs_vec = VectorSequence<F>::finite(std::move(rhs_vec), n);
  } catch (const Error& e) {
    parse_fail("rhs", e.detail());
  }

  if (doc.contains("conditions")) {
    const auto& cs = doc.at("conditions");
    if (!cs.is_array()) parse_fail("conditions", "expected a list");
    if (header.kind == Kind::System) {
      std::vector<typename SystemBoundary<F>::Term> terms;
      Vector<F> h(n);
      if (cs.size() != 1) parse_fail("conditions", "a system takes exactly one vector condition");
      const auto& c = cs[0];
      const auto& ts = require(c, "terms", "conditions[0]");
      if (!ts.is_array()) parse_fail("conditions[0].terms", "expected a list of [matrix, index]");
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::string p = "conditions[0].terms[" + std::to_string(i) + "]";
        if (!ts[i].is_array() || ts[i].size() != 2) parse_fail(p, "expected [matrix, index]");
        terms.push_back({parse_matrix<F>(ts[i][0], p + "[0]", n), parse_index(ts[i][1], p + "[1]")});
      }
      pr.Wsys = SystemBoundary<F>(std::move(terms));
      pr.hsys = parse_vector<F>(require(c, "value", "conditions[0]"), "conditions[0].value", n);
    } else {
      pr.h = Vector<F>(cs.size());
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string p = "conditions[" + std::to_string(i) + "]";
        pr.W.push_back(parse_condition_terms<F>(require(cs[i], "terms", p), p + ".terms"));
        pr.h[i] = parse_scalar<F>(require(cs[i], "value", p), p + ".value");
      }
    }
  }
  return pr;
}

}  // namespace refrec::cli
