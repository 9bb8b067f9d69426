#pragma once

#include <stdexcept>
#include <string>

namespace ousp {

enum class Regime { Slow, Critical, Fast };
enum class Mechanism { Super, Sub };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Slow: return "slow";
    case Regime::Critical: return "critical";
    default: return "fast";
  }
}

// Model quadruple (sigma, mu, alpha, beta) plus spatial dimension.
// The regime is fixed at construction time; use the critical() factory to
// request the boundary case alpha = 2*mu explicitly.
struct ModelParams {
  double sigma;
  double mu;
  double alpha;
  double beta;
  int dim;

  ModelParams(double sigma_, double mu_, double alpha_, double beta_, int dim_ = 1)
      : sigma(sigma_), mu(mu_), alpha(alpha_), beta(beta_), dim(dim_) {
    if (!(sigma > 0.0) || !(mu > 0.0) || !(alpha > 0.0) || !(beta > 0.0))
      throw std::invalid_argument("ModelParams: sigma, mu, alpha, beta must be positive");
    if (dim < 1 || dim > 3)
      throw std::invalid_argument("ModelParams: dim must be 1, 2 or 3");
    if (alpha < 2.0 * mu)
      regime_ = Regime::Slow;
    else if (alpha > 2.0 * mu)
      regime_ = Regime::Fast;
    else
      regime_ = Regime::Critical;
  }

  static ModelParams critical(double sigma_, double mu_, double beta_, int dim_ = 1) {
    return ModelParams(sigma_, mu_, 2.0 * mu_, beta_, dim_);
  }

  Regime regime() const noexcept { return regime_; }
  double lambda_star() const noexcept { return alpha / beta; }
  // Per-coordinate variance of the invariant Gaussian.
  double stationary_var() const noexcept { return sigma * sigma / (2.0 * mu); }

 private:
  Regime regime_;
};

}  // namespace ousp
