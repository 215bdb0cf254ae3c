#ifndef WALSHLAB_COUNTEREXAMPLE_H_
#define WALSHLAB_COUNTEREXAMPLE_H_

// The sharpness martingale for cone-restricted strong summability:
//
//   f = sum_k lambda_k a_k,
//   lambda_k = 2^(2[alpha]+2) Phi(2^a_k, 2^a_k)^(-1/4),
//   a_k = 2^(a_k(2/p-2) - 2[alpha] - 2) u_k(x) u_k(y),
//   u_k = D_{2^(a_k+[alpha]+1)} - D_{2^a_k},
//
// together with the numerical chain that shows the weighted cone sums blow
// up: coefficient blocks, block partial sums, their closed-form modulus on
// (G \ I_1)^2, the weak-L_p lower bound and the per-block accounting.
//
// Note: the block partial sum uses the blocks [2^a, 2^(a+[alpha]+1)) for the
// earlier terms, matching the coefficient pattern. For [alpha] >= 1 this is
// wider than the blocks [2^a, 2^(a+1)) one may find written for that step.

#include <optional>
#include <string>
#include <vector>

#include "walshlab/dyadic.h"
#include "walshlab/hardy.h"
#include "walshlab/summability.h"

namespace walshlab {

// [alpha] + 1: number of dyadic octaves spanned by one coefficient block.
int block_octaves(double alpha);

struct AlphaSequence {
  std::vector<int> entries;
  double alpha = 1.0;
  double p = 0.5;
  double tail_bound = 0.0;
};

// Greedy choice: a_0 is the smallest a >= 2 with Phi^(-p/4)(2^a,2^a) <= 1 and
// a_{k+1} the smallest a >= a_k + [alpha] + 2 with Phi^(-p/4)(2^a,2^a) <=
// 2^-(k+1). Throws if the threshold is not reached by `search_cap`.
AlphaSequence select_alpha_sequence(const WeightFunction& phi, double p,
                                    double alpha, int K, int search_cap = 1000);

struct CounterexampleAtom {
  int alpha_k = 2;
  double p = 0.5;
  double alpha = 1.0;
  double scale = 1.0;  // 2^(a_k(2/p-2) - 2[alpha] - 2)
  StepFn1 factor;      // u_k at resolution a_k + [alpha] + 1
  std::optional<Atom> grid;

  SeparableSum2 separable() const;
};

CounterexampleAtom build_atom(double p, double alpha, int alpha_k,
                              const Limits& limits = {});

struct Counterexample {
  AlphaSequence seq;
  WeightFunction phi;
  std::vector<double> lambdas;
  std::vector<CounterexampleAtom> atoms;
  // sum_k c_k u_k(x) u_k(y) with c_k = lambda_k * scale_k.
  SeparableSum2 separable;
  double hp_upper_bound = 0.0;
  std::optional<Martingale2> martingale;

  double p() const { return seq.p; }
  double alpha() const { return seq.alpha; }
  int levels() const { return static_cast<int>(seq.entries.size()); }
  // v_k = 2^(a_k(2/p-2)) / Phi^(1/4)(2^a_k, 2^a_k): the coefficient height
  // on block k.
  double height(int k) const;
  // Block k such that 2^a_k <= i < 2^(a_k+[alpha]+1).
  std::optional<int> block_of(Index i) const;
  std::uint64_t block_begin(int k) const;
  std::uint64_t block_end(int k) const;
};

Counterexample build_counterexample(double p, double alpha,
                                    const WeightFunction& phi, int K,
                                    const Limits& limits = {});
// Uses a caller-supplied sequence, for instance to evaluate the construction
// under a weight that does not satisfy the growth hypothesis.
Counterexample build_counterexample(AlphaSequence seq, const WeightFunction& phi,
                                    const Limits& limits = {});

double predicted_coefficient(const Counterexample& ce, Index i, Index j);

// S_{m,n} f as a separable sum when 2^a_k < m, n < 2^(a_k+[alpha]+1).
SeparableSum2 block_partial_sum(const Counterexample& ce, Index m, Index n);

// |S_{m,n} f| on (G \ I_1)^2 for odd m, n inside block k.
double closed_form_value(const Counterexample& ce, int k, Index m, Index n);

// (1/2) (1/4)^(1/p) v_k, from lambda = v_k / 2 and mu((G \ I_1)^2) = 1/4.
double weak_lp_lower_bound(const Counterexample& ce, int k, double p);

struct OddIndexCounts {
  long long direct = 0;     // odd m in (2^a, 2^(a+alpha)]
  long long reindexed = 0;  // m' in (2^(a-1), 2^(a-1+alpha)], m = 2m'+1
};
OddIndexCounts odd_index_counts(int alpha_k, double alpha);

struct DivergenceRow {
  int k = 0;
  int alpha_k = 0;
  double lambda_k = 0.0;
  double v_k = 0.0;
  double lower_bound = 0.0;
  double t_k = 0.0;         // closed-form accounting over odd cone pairs
  double g_k = 0.0;         // c_p Phi^(3/4)(2^a_k, 2^a_k)
  double phi_diag = 0.0;    // Phi(2^a_k, 2^a_k)
  long long pairs = 0;      // odd cone pairs in the block
  bool exact = false;
  double exact_weak = 0.0;    // same sum with measured weak-L_p norms
  double exact_strong = 0.0;  // same sum with measured L_p norms

  double ratio() const { return t_k / g_k; }
  const char* regime() const { return exact ? "exact" : "closed-form"; }
};

// Brute-force version of the block accounting, one term per pair. Kept for
// weights without a min-profile and as a test oracle.
double block_weight_sum_direct(std::uint64_t begin, std::uint64_t end, double p,
                               double alpha, const WeightFunction& phi);
// Same sum over odd cone pairs in (begin, end)^2, of Phi(m,n)/(mn)^(2-p).
double block_weight_sum(std::uint64_t begin, std::uint64_t end, double p,
                        double alpha, const WeightFunction& phi);

std::vector<DivergenceRow> divergence_table(const Counterexample& ce, double p,
                                            double alpha,
                                            const WeightFunction& phi,
                                            int k_max, const Limits& limits = {});

}  // namespace walshlab

#endif  // WALSHLAB_COUNTEREXAMPLE_H_
