#include "ousp/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace ousp {

namespace {
constexpr double kZeroTol = 0.0;  // exact zeros only; rounding noise is kept

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

Polynomial::Polynomial(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("Polynomial: dim must be >= 1");
}

Polynomial Polynomial::constant(double c, int dim) {
  Polynomial p(dim);
  if (c != 0.0) p.terms_[MultiIndex(dim, 0)] = c;
  return p;
}

Polynomial Polynomial::variable(int j, int dim) {
  if (j < 0 || j >= dim) throw std::invalid_argument("Polynomial: bad variable index");
  Polynomial p(dim);
  MultiIndex k(dim, 0);
  k[j] = 1;
  p.terms_[k] = 1.0;
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_)
    d = std::max(d, std::accumulate(k.begin(), k.end(), 0));
  return d;
}

double Polynomial::coeff(const MultiIndex& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const MultiIndex& k, double c) {
  if ((int)k.size() != dim_) throw std::invalid_argument("Polynomial: bad multi-index size");
  int deg = 0;
  for (int e : k) {
    if (e < 0) throw std::invalid_argument("Polynomial: negative exponent");
    deg += e;
  }
  if (deg > kDegreeCap) throw std::invalid_argument("Polynomial: degree cap exceeded");
  double& slot = terms_[k];
  slot += c;
  if (slot == kZeroTol) terms_.erase(k);
}

void Polynomial::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0.0)
      it = terms_.erase(it);
    else
      ++it;
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r += o;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
  for (const auto& [k, c] : o.terms_) {
    double& slot = terms_[k];
    slot += c;
    if (slot == 0.0) terms_.erase(k);
  }
  return *this;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.dim_ != dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
  Polynomial r(dim_);
  MultiIndex k(dim_);
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) {
      int deg = 0;
      for (int j = 0; j < dim_; ++j) {
        k[j] = ka[j] + kb[j];
        deg += k[j];
      }
      if (deg > kDegreeCap) throw std::invalid_argument("Polynomial: degree cap exceeded in product");
      r.terms_[k] += ca * cb;
    }
  r.prune();
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r(dim_);
  if (s == 0.0) return r;
  for (const auto& [k, c] : terms_) r.terms_[k] = c * s;
  return r;
}

Polynomial Polynomial::partial(int j) const {
  if (j < 0 || j >= dim_) throw std::invalid_argument("Polynomial: bad partial index");
  Polynomial r(dim_);
  for (const auto& [k, c] : terms_) {
    if (k[j] == 0) continue;
    MultiIndex kk = k;
    kk[j] -= 1;
    r.terms_[kk] += c * k[j];
  }
  r.prune();
  return r;
}

double Polynomial::eval(const double* x) const {
  double acc = 0.0;
  for (const auto& [k, c] : terms_) {
    double term = c;
    for (int j = 0; j < dim_; ++j)
      for (int e = 0; e < k[j]; ++e) term *= x[j];
    acc += term;
  }
  return acc;
}

double Polynomial::coeff_norm() const {
  double n = 0.0;
  for (const auto& [k, c] : terms_) n += std::fabs(c);
  return n;
}

double Polynomial::max_coeff_diff(const Polynomial& o) const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::fabs(c - o.coeff(k)));
  for (const auto& [k, c] : o.terms_) m = std::max(m, std::fabs(c - coeff(k)));
  return m;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += format_double(c);
    for (int j = 0; j < dim_; ++j) {
      if (k[j] == 0) continue;
      out += " * x" + std::to_string(j + 1);
      if (k[j] > 1) out += "^" + std::to_string(k[j]);
    }
  }
  return out;
}

namespace {

struct Lexer {
  const char* p;
  void skip() {
    while (*p == ' ' || *p == '\t') ++p;
  }
};

}  // namespace

Polynomial Polynomial::parse(const std::string& text, int dim) {
  Polynomial out(dim);
  Lexer lx{text.c_str()};
  lx.skip();
  if (*lx.p == '\0') throw std::invalid_argument("Polynomial: empty input");
  bool expect_term = true;
  double sign = 1.0;
  while (true) {
    lx.skip();
    if (*lx.p == '\0') {
      if (expect_term) throw std::invalid_argument("Polynomial: dangling operator");
      break;
    }
    if (!expect_term) {
      if (*lx.p == '+') {
        sign = 1.0;
      } else if (*lx.p == '-') {
        sign = -1.0;
      } else {
        throw std::invalid_argument(std::string("Polynomial: expected '+' or '-' at \"") + lx.p + "\"");
      }
      ++lx.p;
      expect_term = true;
      continue;
    }
    // one term: optional leading sign, coefficient and/or variable factors
    while (*lx.p == '+' || *lx.p == '-') {
      if (*lx.p == '-') sign = -sign;
      ++lx.p;
      lx.skip();
    }
    double c = 1.0;
    bool saw_factor = false;
    MultiIndex k(dim, 0);
    while (true) {
      lx.skip();
      if (*lx.p == '*') {
        ++lx.p;
        continue;
      }
      if (*lx.p == 'x') {
        ++lx.p;
        char* end = nullptr;
        long idx = std::strtol(lx.p, &end, 10);
        if (end == lx.p) idx = 1;  // bare "x" means x1
        if (idx < 1 || idx > dim) throw std::invalid_argument("Polynomial: variable index out of range");
        lx.p = end ? end : lx.p;
        int expn = 1;
        if (*lx.p == '^') {
          ++lx.p;
          char* e2 = nullptr;
          expn = (int)std::strtol(lx.p, &e2, 10);
          if (e2 == lx.p) throw std::invalid_argument("Polynomial: missing exponent");
          lx.p = e2;
        }
        k[idx - 1] += expn;
        saw_factor = true;
        continue;
      }
      if ((*lx.p >= '0' && *lx.p <= '9') || *lx.p == '.') {
        char* end = nullptr;
        c *= std::strtod(lx.p, &end);
        if (end == lx.p) throw std::invalid_argument("Polynomial: bad number");
        lx.p = end;
        saw_factor = true;
        continue;
      }
      break;
    }
    if (!saw_factor) throw std::invalid_argument("Polynomial: empty term");
    out.add_term(k, sign * c);
    sign = 1.0;
    expect_term = false;
  }
  return out;
}

CompiledPoly::CompiledPoly(const Polynomial& p) : dim_(p.dim()) {
  deg_[0] = deg_[1] = deg_[2] = 0;
  for (const auto& [k, c] : p.terms())
    for (int j = 0; j < dim_; ++j) deg_[j] = std::max(deg_[j], k[j]);
  int n = 1;
  for (int j = 0; j < dim_; ++j) n *= deg_[j] + 1;
  c_.assign(n, 0.0);
  for (const auto& [k, c] : p.terms()) {
    int idx = 0;
    for (int j = 0; j < dim_; ++j) idx = idx * (deg_[j] + 1) + k[j];
    c_[idx] = c;
  }
}

double CompiledPoly::eval(const double* x) const {
  if (dim_ == 1) {
    // Horner
    double acc = 0.0;
    for (int a = deg_[0]; a >= 0; --a) acc = acc * x[0] + c_[a];
    return acc;
  }
  double acc = 0.0;
  int n1 = deg_[1] + 1;
  int n2 = dim_ >= 3 ? deg_[2] + 1 : 1;
  double p0 = 1.0;
  for (int a0 = 0; a0 <= deg_[0]; ++a0) {
    double p1 = 1.0;
    for (int a1 = 0; a1 <= deg_[1]; ++a1) {
      if (dim_ == 2) {
        acc += c_[(a0 * n1 + a1)] * p0 * p1;
      } else {
        double p2 = 1.0;
        for (int a2 = 0; a2 <= deg_[2]; ++a2) {
          acc += c_[(a0 * n1 + a1) * n2 + a2] * p0 * p1 * p2;
          p2 *= x[2];
        }
      }
      p1 *= x[1];
    }
    p0 *= x[0];
  }
  return acc;
}

}  // namespace ousp
