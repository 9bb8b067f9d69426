#include "ousp/phi.hpp"

#include <stdexcept>

namespace ousp {

double gaussian_moment_1d(int m, double var) {
  if (m < 0) throw std::invalid_argument("gaussian_moment_1d: negative order");
  if (m % 2 == 1) return 0.0;
  double acc = 1.0;
  for (int j = 1; j < m; j += 2) acc *= j * var;  // (m-1)!! var^{m/2}
  return acc;
}

double gaussian_moment(const ModelParams& p, const MultiIndex& k) {
  if ((int)k.size() != p.dim) throw std::invalid_argument("gaussian_moment: bad multi-index");
  double v = p.stationary_var();
  double acc = 1.0;
  for (int e : k) acc *= gaussian_moment_1d(e, v);
  return acc;
}

double phi_integral(const Polynomial& f, const ModelParams& p) {
  double acc = 0.0;
  for (const auto& [k, c] : f.terms()) acc += c * gaussian_moment(p, k);
  return acc;
}

Polynomial center(const Polynomial& f, const ModelParams& p) {
  return f - Polynomial::constant(phi_integral(f, p), f.dim());
}

std::vector<double> grad_inner(const Polynomial& f, const ModelParams& p) {
  std::vector<double> g(f.dim());
  for (int j = 0; j < f.dim(); ++j) g[j] = phi_integral(f.partial(j), p);
  return g;
}

}  // namespace ousp
