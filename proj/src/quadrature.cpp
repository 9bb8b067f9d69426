#include "ousp/quadrature.hpp"

#include <cmath>

namespace ousp {

namespace {

constexpr int kN = 15;
constexpr double kNode[kN] = {
    -9.87992518020485377e-01, -9.37273392400705951e-01, -8.48206583410427206e-01,
    -7.24417731360170070e-01, -5.70972172608538830e-01, -3.94151347077563385e-01,
    -2.01194093997434514e-01, 0.00000000000000000e+00,  2.01194093997434514e-01,
    3.94151347077563385e-01,  5.70972172608538830e-01,  7.24417731360170070e-01,
    8.48206583410427206e-01,  9.37273392400705951e-01,  9.87992518020485377e-01};
constexpr double kWeight[kN] = {
    3.07532419961186465e-02, 7.03660474881080689e-02, 1.07159220467171773e-01,
    1.39570677926153908e-01, 1.66269205816993781e-01, 1.86161000015561878e-01,
    1.98431485327111246e-01, 2.02578241925560898e-01, 1.98431485327111246e-01,
    1.86161000015561878e-01, 1.66269205816993781e-01, 1.39570677926153908e-01,
    1.07159220467171773e-01, 7.03660474881080689e-02, 3.07532419961186465e-02};

double panel_scalar(const std::function<double(double)>& f, double a, double b) {
  double h = 0.5 * (b - a), m = 0.5 * (a + b);
  double acc = 0.0;
  for (int i = 0; i < kN; ++i) acc += kWeight[i] * f(m + h * kNode[i]);
  return acc * h;
}

void adapt_scalar(const std::function<double(double)>& f, double a, double b, double whole,
                  double tol_density, double rel_tol, int depth, ScalarQuad& out) {
  double m = 0.5 * (a + b);
  double left = panel_scalar(f, a, m);
  double right = panel_scalar(f, m, b);
  double diff = std::fabs(left + right - whole);
  double tol = tol_density * (b - a) + rel_tol * std::fabs(left + right);
  if (diff <= tol || depth <= 0) {
    out.value += left + right;
    out.abs_error += diff;
    if (diff > tol) out.converged = false;
    return;
  }
  adapt_scalar(f, a, m, left, tol_density, rel_tol, depth - 1, out);
  adapt_scalar(f, m, b, right, tol_density, rel_tol, depth - 1, out);
}

struct PolyPanel {
  Polynomial value;
  double node_err;
};

PolyPanel panel_poly(const PolyIntegrand& f, double a, double b, int dim) {
  double h = 0.5 * (b - a), m = 0.5 * (a + b);
  PolyPanel out{Polynomial(dim), 0.0};
  for (int i = 0; i < kN; ++i) {
    auto [p, e] = f(m + h * kNode[i]);
    out.value += p * (kWeight[i] * h);
    out.node_err += kWeight[i] * h * e;
  }
  return out;
}

void adapt_poly(const PolyIntegrand& f, double a, double b, int dim, const PolyPanel& whole,
                double tol_density, double rel_tol, int depth, PolyQuad& out) {
  double m = 0.5 * (a + b);
  PolyPanel left = panel_poly(f, a, m, dim);
  PolyPanel right = panel_poly(f, m, b, dim);
  Polynomial sum = left.value + right.value;
  double diff = (sum - whole.value).coeff_norm();
  double tol = tol_density * (b - a) + rel_tol * sum.coeff_norm();
  if (diff <= tol || depth <= 0) {
    out.value += sum;
    out.abs_error += diff + left.node_err + right.node_err;
    if (diff > tol) out.converged = false;
    return;
  }
  adapt_poly(f, a, m, dim, left, tol_density, rel_tol, depth - 1, out);
  adapt_poly(f, m, b, dim, right, tol_density, rel_tol, depth - 1, out);
}

}  // namespace

ScalarQuad integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol, int max_depth) {
  ScalarQuad out;
  if (a == b) return out;
  double whole = panel_scalar(f, a, b);
  adapt_scalar(f, a, b, whole, abs_tol / (b - a), rel_tol, max_depth, out);
  return out;
}

PolyQuad integrate_poly(const PolyIntegrand& f, double a, double b, int dim, double abs_tol,
                        double rel_tol, int max_depth, int initial_panels) {
  PolyQuad out;
  out.value = Polynomial(dim);
  if (a == b) return out;
  double tol_density = abs_tol / (b - a);
  double step = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    double pa = a + i * step, pb = (i + 1 == initial_panels) ? b : a + (i + 1) * step;
    PolyPanel whole = panel_poly(f, pa, pb, dim);
    adapt_poly(f, pa, pb, dim, whole, tol_density, rel_tol, max_depth, out);
  }
  return out;
}

}  // namespace ousp
