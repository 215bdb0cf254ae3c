#ifndef WALSHLAB_HARDY_H_
#define WALSHLAB_HARDY_H_

// Dyadic martingales on G x G with respect to the squares I_n(x) x I_n(y),
// their maximal function and H_p quasi-norm, p-atoms, and synthesis of a
// martingale from a weighted sequence of atoms.

#include <vector>

#include "walshlab/dyadic.h"

namespace walshlab {

// A martingale stored by its finest stabilized level: a step function on a
// square grid of resolution N. Level n <= N is the average of `finest` over
// the squares I_n x I_n; levels above N all equal `finest`.
class Martingale2 {
 public:
  explicit Martingale2(StepFn2 finest);

  const StepFn2& finest() const { return finest_; }
  int bits() const { return finest_.res_x().bits(); }
  // Smallest n for which level n already equals `finest`.
  int stabilization_level() const { return stabilization_level_; }

 private:
  StepFn2 finest_;
  int stabilization_level_ = 0;
};

// Block averages on the coarse 2^n x 2^n grid, computed by repeated 2x2
// averaging from the finest grid. Entry n of the result has shape 2^n x 2^n.
std::vector<StepFn2> coarse_levels(const Martingale2& f);

StepFn2 level(const Martingale2& f, int n);
StepFn2 maximal_function(const Martingale2& f);
double hardy_quasinorm(const Martingale2& f, double p);

struct Atom {
  StepFn2 fn;
  int cube_level = 0;
  DyadicPoint corner_x{Resolution(0), 0};
  DyadicPoint corner_y{Resolution(0), 0};
  double p = 1.0;
};

struct AtomReport {
  bool support_ok = false;
  bool zero_integral_ok = false;
  bool sup_bound_ok = false;
  double integral = 0.0;
  double sup_norm = 0.0;
  double sup_bound = 0.0;  // mu(I x I)^(-1/p)

  bool valid() const { return support_ok && zero_integral_ok && sup_bound_ok; }
};

// Checks the three p-atom conditions. Failures are reported, never thrown.
AtomReport validate_atom(const Atom& a);

struct AtomicDecomposition {
  struct Entry {
    double weight = 0.0;
    Atom atom;
  };
  std::vector<Entry> entries;
};

struct AssembledMartingale {
  Martingale2 martingale;
  // (sum |mu_k|^p)^(1/p); the H_p quasi-norm is bounded by a constant times
  // this value.
  double hp_upper_bound = 0.0;
};

AssembledMartingale assemble(const AtomicDecomposition& d,
                             const Limits& limits = {});

}  // namespace walshlab

#endif  // WALSHLAB_HARDY_H_
