#include "refrec/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "refrec/errors.hpp"

namespace refrec {

namespace {

constexpr double kMachineEps = 2.220446049250313e-16;

std::vector<Complex> derivative(const std::vector<Complex>& a) {
  std::vector<Complex> d;
  for (std::size_t l = 1; l < a.size(); ++l) d.push_back(static_cast<double>(l) * a[l]);
  return d;
}

/// Sum of |a_l| |z|^l: the scale against which p(z) is judged to vanish.
double eval_scale(const std::vector<Complex>& a, Complex z) {
  double s = 0, zp = 1;
  for (const auto& c : a) {
    s += std::abs(c) * zp;
    zp *= std::abs(z);
  }
  return s;
}

std::vector<Complex> initial_guesses(const std::vector<Complex>& a) {
  const std::size_t n = a.size() - 1;
  // Cauchy-style radius from the coefficient magnitudes
  double r = 0;
  for (std::size_t l = 0; l < n; ++l) {
    r = std::max(r, std::pow(std::abs(a[l] / a[n]), 1.0 / static_cast<double>(n - l)));
  }
  if (r == 0) r = 1;
  std::vector<Complex> z;
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n) + 0.4;
    z.push_back(std::polar(r, theta));
  }
  return z;
}

Complex ipow(Complex z, Index k) {
  if (k < 0) return 1.0 / ipow(z, -k);
  Complex r = 1;
  while (k > 0) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

}  // namespace

Complex poly_eval(const std::vector<Complex>& a, Complex z) {
  Complex acc = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
  return acc;
}

CharacteristicRoots characteristic_roots(const std::vector<Complex>& coeffs, RootOptions opts) {
  std::vector<Complex> a = coeffs;
  while (!a.empty() && a.back() == Complex{}) a.pop_back();
  if (a.size() < 2) throw Error(ErrorCode::InvalidArgument, "characteristic polynomial of degree < 1");
  // zero roots are split off so the iteration only sees a(0) != 0
  int zero_mult = 0;
  while (a.front() == Complex{}) {
    a.erase(a.begin());
    ++zero_mult;
  }
  const std::size_t n = a.size() - 1;
  const auto da = derivative(a);
  std::vector<Complex> z = n > 0 ? initial_guesses(a) : std::vector<Complex>{};

  bool converged = n == 0;
  for (int it = 0; it < opts.max_iterations && !converged; ++it) {
    converged = true;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex p = poly_eval(a, z[i]);
      if (std::abs(p) <= 16 * kMachineEps * eval_scale(a, z[i])) continue;
      converged = false;
      const Complex ratio = p / poly_eval(da, z[i]);
      Complex sum = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      z[i] -= ratio / (1.0 - ratio * sum);
    }
  }
  if (!converged) throw Error(ErrorCode::NoConvergence, "root iteration did not converge");

  CharacteristicRoots out;
  if (zero_mult > 0) {
    out.roots.push_back(0);
    out.multiplicities.push_back(zero_mult);
  }
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> cluster{i};
    used[i] = true;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!used[j] && std::abs(z[i] - z[j]) <= opts.cluster_tol * (1 + std::abs(z[i]))) {
        cluster.push_back(j);
        used[j] = true;
      }
    }
    Complex center = 0;
    for (auto j : cluster) center += z[j];
    center /= static_cast<double>(cluster.size());
    // a root of multiplicity h is a simple root of p^(h-1)
    std::vector<Complex> dp = a;
    for (std::size_t h = 1; h < cluster.size(); ++h) dp = derivative(dp);
    const auto ddp = derivative(dp);
    for (int k = 0; k < 50; ++k) {
      const Complex d = poly_eval(ddp, center);
      if (d == Complex{}) break;
      const Complex step = poly_eval(dp, center) / d;
      center -= step;
      if (std::abs(step) <= 4 * kMachineEps * (1 + std::abs(center))) break;
    }
    out.roots.push_back(center);
    out.multiplicities.push_back(static_cast<int>(cluster.size()));
  }
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    for (std::size_t j = i + 1; j < out.roots.size(); ++j) {
      if (std::abs(out.roots[i] - out.roots[j]) <= opts.distinct_tol * (1 + std::abs(out.roots[i]))) {
        throw Error(ErrorCode::NoConvergence, "root clusters failed to separate");
      }
    }
  }
  return out;
}

int CharacteristicRoots::degree() const {
  int d = 0;
  for (int h : multiplicities) d += h;
  return d;
}

std::vector<Sequence<Complex>> CharacteristicRoots::basis() const {
  std::vector<Sequence<Complex>> out;
  for (std::size_t l = 0; l < roots.size(); ++l) {
    for (int j = 0; j < multiplicities[l]; ++j) {
      const Complex lambda = roots[l];
      out.push_back(Sequence<Complex>::rule([lambda, j](Index k) {
        return std::pow(static_cast<double>(k), j) * ipow(lambda, k);
      }));
    }
  }
  return out;
}

}  // namespace refrec
