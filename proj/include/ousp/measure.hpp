#pragma once

#include <stdexcept>
#include <vector>

namespace ousp {

// Finite atomic measure on R^d.  Empty atom list = zero measure.
class AtomicMeasure {
 public:
  struct Atom {
    std::vector<double> x;
    double mass;
  };

  explicit AtomicMeasure(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("AtomicMeasure: dim must be >= 1");
  }

  static AtomicMeasure delta(const std::vector<double>& x, double mass = 1.0) {
    AtomicMeasure m((int)x.size());
    m.add_atom(x, mass);
    return m;
  }

  void add_atom(const std::vector<double>& x, double mass) {
    if ((int)x.size() != dim_) throw std::invalid_argument("AtomicMeasure: dimension mismatch");
    if (!(mass > 0.0)) throw std::invalid_argument("AtomicMeasure: mass must be positive");
    atoms_.push_back({x, mass});
    total_ += mass;
  }

  int dim() const noexcept { return dim_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  double total_mass() const noexcept { return total_; }
  bool empty() const noexcept { return atoms_.empty(); }

 private:
  int dim_;
  std::vector<Atom> atoms_;
  double total_ = 0.0;
};

}  // namespace ousp
