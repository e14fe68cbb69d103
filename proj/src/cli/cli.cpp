#include "refrec/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "problem.hpp"
#include "refrec/oracle.hpp"
#include "refrec/residual.hpp"
#include "refrec/scalar_green.hpp"
#include "refrec/system_green.hpp"

namespace refrec::cli {

namespace {

struct Options {
  std::string problem_path;
  std::string solution_path;
  std::string field;
  std::string window;
  std::string format = "csv";
  std::string out_path;
  double tolerance = 0;
  bool regions = false;
};

using Table = std::vector<std::vector<std::string>>;

void write_table(std::ostream& os, const Table& t, const std::string& format) {
  if (format == "csv") {
    for (const auto& row : t) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
    return;
  }
  std::vector<std::size_t> width;
  for (const auto& row : t) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  for (const auto& row : t) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += std::string(width[i] - row[i].size(), ' ') + row[i];
    }
    os << line << '\n';
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json terms_json(const LaurentPoly<Rational>& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms()) out.push_back({e, c.to_string()});
  return out;
}

json terms_json(const LaurentPoly<Complex>& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms()) out.push_back({e, {c.real(), c.imag()}});
  return out;
}

template <Field F>
std::string op_text(const ReflectionOperator<F>& r) {
  return "phi* [" + r.P().to_string() + "] + [" + r.Q().to_string() + "]";
}

std::string residual_line(const ResidualReport& r, bool exact) {
  std::ostringstream os;
  if (exact) {
    os << "# residual: " << (r.exact_zero ? "exact-zero" : "nonzero at " + std::to_string(r.offending.size()) + " indices");
  } else {
    os << "# residual: max-abs=" << format_double(r.max_abs) << " max-rel=" << format_double(r.max_relative);
  }
  return os.str();
}

template <Field F>
void cmd_reduce(const Problem<F>& pr, std::ostream& out) {
  if (pr.header.kind != Kind::ScalarReflection) {
    throw Error(ErrorCode::ParseError, "kind: reduce needs a scalar-reflection problem");
  }
  const auto& L = pr.L;
  const auto tol = pr.header.tol;
  const auto red = reduce_gcd(L, tol);
  const auto norm = normalize_to_poly(L, red.Rtilde, red.S);
  out << "P: " << L.P().to_string() << '\n';
  out << "Q: " << L.Q().to_string() << '\n';
  out << "Lbar: " << red.Lbar.to_string() << '\n';
  out << "Rtilde: " << op_text(red.Rtilde) << '\n';
  out << "Rbar: " << op_text(norm.Rbar) << '\n';
  out << "S: " << red.S.to_string() << '\n';
  out << "Spoly: " << norm.Spoly.to_string() << '\n';
  out << "k: " << norm.k << '\n';
  json m;
  m["P"] = terms_json(L.P());
  m["Q"] = terms_json(L.Q());
  m["Lbar"] = terms_json(red.Lbar);
  m["Rtilde"] = {{"P", terms_json(red.Rtilde.P())}, {"Q", terms_json(red.Rtilde.Q())}};
  m["Rbar"] = {{"P", terms_json(norm.Rbar.P())}, {"Q", terms_json(norm.Rbar.Q())}};
  m["S"] = terms_json(red.S);
  m["Spoly"] = terms_json(norm.Spoly);
  m["k"] = norm.k;
  out << "--- machine-readable\n" << m.dump() << '\n';
}

template <Field F>
void cmd_green(const Problem<F>& pr, std::ostream& out, const Options& opt) {
  const Window w = pr.header.window;
  Table t;
  std::vector<std::string> header{"k\\j"};
  for (Index j = w.lo; j <= w.hi; ++j) header.push_back(std::to_string(j));
  t.push_back(header);

  if (pr.header.kind == Kind::System) {
    const FundamentalMatrix<F> fm(pr.system, pr.header.tol);
    const SystemGreen<F> g(fm.generator(), pr.header.tol);
    for (Index k = w.lo; k <= w.hi; ++k) {
      std::vector<std::string> row{std::to_string(k)};
      for (Index j = w.lo; j <= w.hi; ++j) {
        const auto m = g(k, j);
        std::string cell;
        for (std::size_t a = 0; a < m.rows(); ++a)
          for (std::size_t b = 0; b < m.cols(); ++b) cell += (cell.empty() ? "" : ";") + format_scalar(m(a, b));
        row.push_back(cell);
      }
      t.push_back(std::move(row));
    }
    write_table(out, t, opt.format);
    return;
  }

  RecurrenceOperator<F> s = pr.header.kind == Kind::Scalar ? RecurrenceOperator<F>(pr.coeffs) : [&] {
    const auto red = reduce_gcd(pr.L, pr.header.tol);
    normalize_to_poly(pr.L, red.Rtilde, red.S);
    const auto star = psi_factor(red.S).star_part;
    if (star.deg_high() == 0) {
      throw Error(ErrorCode::InvalidArgument, "the reduced operator is a constant; there is no Green's function table");
    }
    return RecurrenceOperator<F>::from_poly(star);
  }();
  const GreenFunction<F> g(s, w, pr.header.tol);
  for (Index k = w.lo; k <= w.hi; ++k) {
    std::vector<std::string> row{std::to_string(k)};
    for (Index j = w.lo; j <= w.hi; ++j) {
      std::string cell = format_scalar(g(k, j));
      if (opt.regions) cell += "|" + std::string(to_string(g.region(k, j)));
      row.push_back(std::move(cell));
    }
    t.push_back(std::move(row));
  }
  write_table(out, t, opt.format);
}

template <Field F>
Table solution_table(const Sequence<F>& u, Window w) {
  Table t{{"k", "u"}};
  for (Index k = w.lo; k <= w.hi; ++k) t.push_back({std::to_string(k), format_scalar(u(k))});
  return t;
}

template <Field F>
Table solution_table(const VectorSequence<F>& u, Window w, std::size_t n) {
  Table t{{"k"}};
  for (std::size_t i = 0; i < n; ++i) t[0].push_back("u" + std::to_string(i));
  for (Index k = w.lo; k <= w.hi; ++k) {
    std::vector<std::string> row{std::to_string(k)};
    const auto v = u(k);
    for (std::size_t i = 0; i < n; ++i) row.push_back(format_scalar(v[i]));
    t.push_back(std::move(row));
  }
  return t;
}

/// Indices k at which every term of L u(k) refers to an index inside `range`.
template <Field F>
std::vector<Index> interior(const ReflectionOperator<F>& L, Window range) {
  std::vector<Index> ks;
  for (Index k = range.lo; k <= range.hi; ++k) {
    bool ok = true;
    for (const auto& [e, c] : L.P().terms()) ok = ok && range.contains(-k + e);
    for (const auto& [e, c] : L.Q().terms()) ok = ok && range.contains(k + e);
    if (ok) ks.push_back(k);
  }
  return ks;
}

template <Field F>
ResidualReport residual_at(const ReflectionOperator<F>& L, const Sequence<F>& u, const Sequence<F>& c,
                           const std::vector<Index>& ks, Tolerance tol) {
  ResidualReport total;
  for (Index k : ks) {
    const auto r = residual(L, u, c, Window(k, k), tol);
    total.exact_zero = total.exact_zero && r.exact_zero;
    total.max_abs = std::max(total.max_abs, r.max_abs);
    total.max_relative = std::max(total.max_relative, r.max_relative);
    total.offending.insert(total.offending.end(), r.offending.begin(), r.offending.end());
  }
  return total;
}

template <Field F>
std::vector<BoundaryFunctional<F>> effective_conditions(const Problem<F>& pr, Vector<F>& h) {
  if (pr.header.kind == Kind::Scalar && pr.W.empty()) {
    std::vector<BoundaryFunctional<F>> W;
    for (std::size_t i = 0; i + 1 < pr.coeffs.size(); ++i) W.push_back(BoundaryFunctional<F>::eval_at(static_cast<Index>(i)));
    h = Vector<F>(W.size());
    return W;
  }
  h = pr.h;
  return pr.W;
}

template <Field F>
int cmd_solve(const Problem<F>& pr, std::ostream& out, const Options& opt, bool system_only) {
  const Window w = pr.header.window;
  const auto tol = pr.header.tol;
  constexpr bool exact = FieldTraits<F>::exact;
  if (system_only && pr.header.kind != Kind::System) {
    throw Error(ErrorCode::ParseError, "kind: solve-system needs a system problem");
  }
  if (pr.header.kind == Kind::System) {
    if (!pr.Wsys) throw Error(ErrorCode::ParseError, "conditions: a system problem needs one vector condition");
    const auto sol = solve_system(pr.system, pr.rhs_vec, *pr.Wsys, pr.hsys, w, tol);
    write_table(out, solution_table(sol.u, w, pr.system.dim()), opt.format);
    const Window inner(w.lo + 1, w.hi - 1);
    out << residual_line(system_residual(pr.system, sol.u, pr.rhs_vec, inner, tol), exact) << '\n';
    out << "# boundary: pass\n";
    return kOk;
  }

  ReflectionOperator<F> L;
  Sequence<F> u;
  std::string note;
  if (pr.header.kind == Kind::Scalar) {
    const RecurrenceOperator<F> s(pr.coeffs);
    L = ReflectionOperator<F>::plain(s.poly());
    if (pr.W.empty()) {
      u = solve_ivp(s, pr.rhs, w);
    } else {
      u = solve_bvp(s, pr.rhs, pr.W, pr.h, w, tol);
    }
  } else {
    L = pr.L;
    u = solve_reflection_bvp(L, pr.rhs, pr.W, pr.h, w, tol);
    const auto red = reduce_gcd(L, tol);
    if (red.S.deg_low() == red.S.deg_high() && red.S.deg_low() == 0) {
      note = "# note: L Rtilde = " + red.S.to_string() +
             " is a nonzero constant, so L u = c has exactly one solution and L u = 0 only u = 0";
    }
  }
  write_table(out, solution_table(u, w), opt.format);
  const auto res = residual_at(L, u, pr.rhs, interior(L, w), tol);
  Vector<F> h;
  const auto W = effective_conditions(pr, h);
  const bool boundary_ok = vector_mismatch(apply_all(W, u), h, tol).passes(exact, tol);
  out << residual_line(res, exact) << '\n';
  out << "# boundary: " << (boundary_ok ? "pass" : "FAIL") << '\n';
  if (!note.empty()) out << note << '\n';
  if (!res.passes(exact, tol) || !boundary_ok) throw Error(ErrorCode::VerificationFailed, "solution check failed");
  return kOk;
}

/// Parses "k,v0,v1,..." rows; '#' lines and the header are skipped. Rows must
/// cover a contiguous index range.
template <Field F>
std::pair<std::map<Index, std::vector<F>>, Window> parse_solution(const std::string& text, std::size_t width) {
  std::map<Index, std::vector<F>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line[0] == 'k') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    const std::string where = "solution line " + std::to_string(lineno);
    if (cells.size() != width + 1) parse_fail(where, "expected " + std::to_string(width + 1) + " columns");
    Index k = 0;
    try {
      std::size_t pos = 0;
      k = std::stoll(cells[0], &pos);
      if (pos != cells[0].size()) throw std::invalid_argument("k");
    } catch (const std::logic_error&) {
      parse_fail(where, "bad index '" + cells[0] + "'");
    }
    std::vector<F> vals;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      try {
        if constexpr (std::is_same_v<F, Rational>) {
          vals.push_back(Rational::parse(cells[i]));
        } else {
          vals.push_back(parse_complex(cells[i]));
        }
      } catch (const Error& e) {
        parse_fail(where, e.detail());
      }
    }
    if (!rows.emplace(k, std::move(vals)).second) parse_fail(where, "duplicate index " + std::to_string(k));
  }
  if (rows.empty()) parse_fail("solution", "no rows");
  const Window range(rows.begin()->first, rows.rbegin()->first);
  if (rows.size() != range.size()) parse_fail("solution", "indices must be contiguous");
  return {std::move(rows), range};
}

std::string index_list(const std::vector<Index>& ks) {
  std::string s;
  for (std::size_t i = 0; i < ks.size() && i < 20; ++i) s += (i ? " " : "") + std::to_string(ks[i]);
  if (ks.size() > 20) s += " ...";
  return s;
}

template <Field F>
int cmd_verify(const Problem<F>& pr, const std::string& solution_text, std::ostream& out) {
  const auto tol = pr.header.tol;
  constexpr bool exact = FieldTraits<F>::exact;
  std::vector<Index> bad_residual;
  bool boundary_ok = true;
  ResidualReport res;
  if (pr.header.kind == Kind::System) {
    const std::size_t n = pr.system.dim();
    auto [rows, range] = parse_solution<F>(solution_text, n);
    std::vector<typename VectorSequence<F>::Entry> entries;
    for (auto& [k, v] : rows) entries.emplace_back(k, Vector<F>(v));
    const auto u = VectorSequence<F>::finite(std::move(entries), n);
    for (Index k = range.lo; k <= range.hi; ++k) {
      if (!range.contains(k + 1) || !range.contains(-k - 1) || !range.contains(-k)) continue;
      const auto r = system_residual(pr.system, u, pr.rhs_vec, Window(k, k), tol);
      res.exact_zero = res.exact_zero && r.exact_zero;
      res.max_abs = std::max(res.max_abs, r.max_abs);
      res.max_relative = std::max(res.max_relative, r.max_relative);
      if (!r.offending.empty()) bad_residual.push_back(k);
    }
    if (pr.Wsys) {
      for (const auto& t : pr.Wsys->terms())
        if (!range.contains(t.index)) parse_fail("solution", "does not cover the condition indices");
      boundary_ok = vector_mismatch((*pr.Wsys)(u), pr.hsys, tol).passes(exact, tol);
    }
  } else {
    auto [rows, range] = parse_solution<F>(solution_text, 1);
    std::vector<typename Sequence<F>::Entry> entries;
    for (auto& [k, v] : rows) entries.emplace_back(k, v[0]);
    const auto u = Sequence<F>::finite(std::move(entries));
    const auto L = pr.header.kind == Kind::Scalar ? ReflectionOperator<F>::plain(RecurrenceOperator<F>(pr.coeffs).poly())
                                                  : pr.L;
    res = residual_at(L, u, pr.rhs, interior(L, range), tol);
    bad_residual = res.offending;
    Vector<F> h;
    const auto W = effective_conditions(pr, h);
    for (const auto& wi : W)
      for (const auto& [idx, wgt] : wi.point_weights())
        if (!range.contains(idx)) parse_fail("solution", "does not cover the condition indices");
    boundary_ok = vector_mismatch(apply_all(W, u), h, tol).passes(exact, tol);
  }
  out << residual_line(res, exact) << '\n';
  out << "# boundary: " << (boundary_ok ? "pass" : "FAIL") << '\n';
  if (bad_residual.empty() && boundary_ok) {
    out << "verify: pass\n";
    return kOk;
  }
  out << "verify: FAIL";
  if (!bad_residual.empty()) out << " residual at k = " << index_list(bad_residual);
  if (!boundary_ok) out << (bad_residual.empty() ? "" : ";") << " boundary conditions violated";
  out << '\n';
  return kVerificationFailed;
}

template <Field F>
int dispatch(const std::string& cmd, const json& doc, Header header, const Options& opt, std::ostream& out) {
  const auto pr = parse_problem<F>(doc, header);
  if (cmd == "reduce") {
    cmd_reduce(pr, out);
    return kOk;
  }
  if (cmd == "green") {
    cmd_green(pr, out, opt);
    return kOk;
  }
  if (cmd == "solve" || cmd == "solve-system") return cmd_solve(pr, out, opt, cmd == "solve-system");
  if (cmd == "verify") return cmd_verify(pr, read_file(opt.solution_path), out);
  throw Error(ErrorCode::InvalidArgument, "unknown command " + cmd);
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::ConditionCountMismatch:
      return kParse;
    case ErrorCode::SingularCasoratian:
    case ErrorCode::SingularConditions:
    case ErrorCode::SingularBlock:
    case ErrorCode::SingularK:
    case ErrorCode::SingularZ:
    case ErrorCode::SingularWindowSystem:
    case ErrorCode::DegenerateLeading:
      return kSingular;
    case ErrorCode::DegenerateReduction:
      return kDegenerateReduction;
    case ErrorCode::VerificationFailed:
      return kVerificationFailed;
    default:
      return kOther;
  }
}

int execute(const std::string& cmd, const Options& opt, std::ostream& out) {
  json doc;
  try {
    doc = json::parse(read_file(opt.problem_path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, opt.problem_path + ": " + e.what());
  }
  Header header = parse_header(doc);
  if (!opt.field.empty()) header.field = opt.field;
  if (!opt.window.empty()) header.window = parse_window_text(opt.window);
  if (opt.tolerance > 0) header.tol.eps = opt.tolerance;
  if (header.field == "complex") return dispatch<Complex>(cmd, doc, header, opt, out);
  return dispatch<Rational>(cmd, doc, header, opt, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver for linear recurrences and first-order systems with reflection"};
  app.require_subcommand(1);
  Options opt;
  std::vector<std::pair<std::string, CLI::App*>> subs;
  auto add = [&](const std::string& name, const std::string& desc, bool takes_solution) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->add_option("problem", opt.problem_path, "problem file (JSON)")->required();
    if (takes_solution) s->add_option("solution", opt.solution_path, "solution file (CSV)")->required();
    s->add_option("--field", opt.field, "scalar field")->check(CLI::IsMember({"rational", "complex"}));
    s->add_option("--window", opt.window, "index window KMIN:KMAX");
    s->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "pretty"}));
    s->add_option("--tolerance", opt.tolerance, "comparison tolerance for the complex field")
        ->check(CLI::PositiveNumber);
    s->add_option("--out", opt.out_path, "write the report to this file");
    if (name == "green") s->add_flag("--regions", opt.regions, "append the region label to each entry");
    subs.emplace_back(name, s);
  };
  add("reduce", "reduce L = phi* P + Q to a plain recurrence", false);
  add("green", "tabulate the Green's function on the window", false);
  add("solve", "solve the problem and check the result", false);
  add("solve-system", "solve a first-order system problem", false);
  add("verify", "check a solution file against the problem", true);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kParse;
  }
  std::string cmd;
  for (const auto& [name, s] : subs)
    if (s->parsed()) cmd = name;

  std::ostringstream report;
  int code = kOk;
  try {
    code = execute(cmd, opt, report);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    code = exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kOther;
  }
  if (opt.out_path.empty()) {
    out << report.str();
  } else {
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << opt.out_path << "'\n";
      return kOther;
    }
    f << report.str();
  }
  return code;
}

}  // namespace refrec::cli
