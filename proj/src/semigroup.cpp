#include "ousp/semigroup.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace ousp {

namespace {

double binom(int n, int k) {
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  return acc;
}

}  // namespace

double SemigroupAction::bridge_variance(double t) const {
  double e = std::exp(-2.0 * p_.mu * t);
  return p_.stationary_var() * (1.0 - e);
}

const std::vector<double>& SemigroupAction::bridge_moments(double t) const {
  {
    std::shared_lock lk(mtx_);
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
  }
  std::vector<double> m(Polynomial::kDegreeCap + 1);
  double v = bridge_variance(t);
  for (int j = 0; j <= Polynomial::kDegreeCap; ++j) m[j] = gaussian_moment_1d(j, v);
  std::unique_lock lk(mtx_);
  return cache_.emplace(t, std::move(m)).first->second;
}

Polynomial SemigroupAction::apply(const Polynomial& f, double t, double a) const {
  if (t < 0.0) throw std::invalid_argument("SemigroupAction::apply: t must be >= 0");
  if (f.dim() != p_.dim) throw std::invalid_argument("SemigroupAction::apply: dimension mismatch");
  const std::vector<double>& gm = bridge_moments(t);
  double decay = std::exp(-p_.mu * t);
  double w = std::exp(a * t);
  int d = f.dim();
  Polynomial out(d);

  // per-coordinate expansion of (x_j decay + G)^e, combined across coords
  std::vector<std::vector<double>> coord(d);
  MultiIndex k(d);
  for (const auto& [e, c] : f.terms()) {
    for (int j = 0; j < d; ++j) {
      coord[j].assign(e[j] + 1, 0.0);
      for (int i = 0; i <= e[j]; ++i)
        coord[j][i] = binom(e[j], i) * std::pow(decay, i) * gm[e[j] - i];
    }
    // outer product over coordinates
    std::fill(k.begin(), k.end(), 0);
    while (true) {
      double term = c * w;
      for (int j = 0; j < d; ++j) term *= coord[j][k[j]];
      if (term != 0.0) out.add_term(k, term);
      int j = 0;
      for (; j < d; ++j) {
        if (k[j] < e[j]) {
          ++k[j];
          break;
        }
        k[j] = 0;
      }
      if (j == d) break;
    }
  }
  return out;
}

double SemigroupAction::gradient_profile_error(const Polynomial& f, const std::vector<double>& x,
                                               double t) const {
  Polynomial ft = center(f, p_);
  Polynomial pf = apply(ft, t, 0.0);
  double lhs = std::exp(p_.mu * t) * pf.eval(x);
  std::vector<double> g = grad_inner(f, p_);
  double rhs = 0.0;
  for (int j = 0; j < p_.dim; ++j) rhs += x[j] * g[j];
  return std::fabs(lhs - rhs);
}

}  // namespace ousp
