#pragma once

#include <map>
#include <string>
#include <vector>

namespace ousp {

using MultiIndex = std::vector<int>;

// Multivariate polynomial over R^d with a dense-enough term map.
// Exponents are capped (default 8) so nested quadrature layers cannot blow
// degree up without anyone noticing.
class Polynomial {
 public:
  static constexpr int kDegreeCap = 8;

  Polynomial() : Polynomial(1) {}
  explicit Polynomial(int dim);

  static Polynomial constant(double c, int dim);
  static Polynomial variable(int j, int dim);  // x_{j+1}, 0-based j

  int dim() const noexcept { return dim_; }
  int degree() const;
  bool is_zero() const noexcept { return terms_.empty(); }
  const std::map<MultiIndex, double>& terms() const noexcept { return terms_; }

  double coeff(const MultiIndex& k) const;
  void add_term(const MultiIndex& k, double c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial& operator+=(const Polynomial& o);

  Polynomial partial(int j) const;  // d/dx_j
  double eval(const double* x) const;
  double eval(const std::vector<double>& x) const { return eval(x.data()); }

  // L1 norm of the coefficient vector; bounds |p(x)| on the unit box.
  double coeff_norm() const;
  double max_coeff_diff(const Polynomial& o) const;

  // Text format: sum of terms "c * x1^a1 * ... * xd^ad"; '^1' omitted,
  // exponent-0 factors omitted.  parse() round-trips to_string() bit-exactly.
  std::string to_string() const;
  static Polynomial parse(const std::string& text, int dim);

 private:
  void prune();
  int dim_;
  std::map<MultiIndex, double> terms_;
};

inline Polynomial operator*(double s, const Polynomial& p) { return p * s; }

// Dense evaluator for hot loops (much cheaper than walking the term map).
// One coefficient slab per coordinate-power profile; exact for dim <= 3.
class CompiledPoly {
 public:
  explicit CompiledPoly(const Polynomial& p);
  double eval(const double* x) const;
  int dim() const noexcept { return dim_; }

 private:
  int dim_;
  int deg_[3];
  std::vector<double> c_;  // row-major over (a1, a2, a3)
};

}  // namespace ousp
