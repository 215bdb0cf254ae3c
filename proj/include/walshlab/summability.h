#ifndef WALSHLAB_SUMMABILITY_H_
#define WALSHLAB_SUMMABILITY_H_

// Strong summability functionals of rectangular Walsh partial sums over the
// cone 2^-alpha <= k/l <= 2^alpha, their diagonal variants, and weight
// functions Phi for the sharpness construction.
//
// Conventions: indices start at 1 (the k = 0 term is zero), logarithms are
// base 2, and [p] = floor(p).

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "walshlab/hardy.h"
#include "walshlab/walsh.h"

namespace walshlab {

enum class NormKind { kStrong, kWeak };

const char* to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& s);

struct Cone {
  double alpha = 0.0;
  Index n = 1;
  Index m = 1;

  bool contains(Index k, Index l) const;
};

// Row-major (k outer, l inner) enumeration of the cone pairs with
// 1 <= k <= n and 1 <= l <= m.
std::vector<std::pair<Index, Index>> cone_indices(double alpha, Index n, Index m);

class WeightFunction {
 public:
  using Evaluator = std::function<double(double m, double n)>;
  using Profile = std::function<double(double t)>;

  WeightFunction(std::string name, Evaluator eval)
      : name_(std::move(name)), eval_(std::move(eval)) {}

  // Phi(m, n) = g(min(m, n)).
  static WeightFunction of_min(std::string name, Profile g);

  double operator()(double m, double n) const { return eval_(m, n); }
  const std::string& name() const { return name_; }
  // Present when Phi depends only on min(m, n).
  const std::optional<Profile>& min_profile() const { return min_profile_; }

 private:
  std::string name_;
  Evaluator eval_;
  std::optional<Profile> min_profile_;
};

// (1 + log2(1 + min(m,n)))^4
WeightFunction log4_weight();
// (1 + log2(1 + log2(1 + min(m,n))))^4
WeightFunction loglog_weight();
WeightFunction constant_weight(double c);
// "log4", "loglog" or "const:<c>".
WeightFunction weight_from_name(const std::string& name);

struct WeightReport {
  bool at_least_one = true;
  bool monotone = true;
  bool diverging_on_grid = false;
  long monotone_violations = 0;
  double min_value = 0.0;
  double largest_diagonal = 0.0;

  bool admissible() const { return at_least_one && monotone && diverging_on_grid; }
};

// Samples Phi on the grid {1, 2, 4, ..., grid_max} x {same}: Phi >= 1,
// monotone on all comparable pairs, and the diagonal still rising at the
// top of the grid.
WeightReport validate_weight(const WeightFunction& phi, Index grid_max);

// Cached ||S_{k,l} f||^p for one martingale, exponent and norm. Indices beyond
// the grid are clamped: S_{k,l} f = S_{min(k,2^N), min(l,2^N)} f.
class PartialSumNorms {
 public:
  PartialSumNorms(const Martingale2& f, double p, NormKind kind);

  double p() const { return p_; }
  NormKind kind() const { return kind_; }

  double powered(Index k, Index l);
  // Fills the cache for all requested pairs, in parallel.
  void prefetch(const std::vector<std::pair<Index, Index>>& pairs);

 private:
  double compute(Index k, Index l) const;
  Index clamp(Index k) const { return std::min(k, side_); }

  Spectrum2 spectrum_;
  double p_;
  NormKind kind_;
  Index side_;
  std::vector<double> cache_;
};

// ||S_{k,l} f||^p / (k l)^(2-p).
double cone_term(double powered_norm, Index k, Index l, double p);

double weisz_inner_sum(PartialSumNorms& norms, double alpha, Index n, Index m);
double weisz_functional(PartialSumNorms& norms, double alpha, Index n, Index m);
double weisz_functional(const Martingale2& f, double p, double alpha, Index n,
                        Index m, NormKind kind);

enum class Variant { kW1, kW2, kTH, kTH1 };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

// Partial sums up to N of the diagonal estimates. W1, W2 and TH1 start at
// index 1, TH at 2. W1 carries the 1/log^2 N prefactor unless disabled.
double diagonal_variant_sum(const Martingale2& f, Variant variant, double p,
                            Index N, bool include_prefactor = true);

double phi_cone_sum(PartialSumNorms& norms, double alpha,
                    const WeightFunction& phi, Index n, Index m);
double phi_cone_sum(const Martingale2& f, double p, double alpha,
                    const WeightFunction& phi, Index n, Index m, NormKind kind);

}  // namespace walshlab

#endif  // WALSHLAB_SUMMABILITY_H_
