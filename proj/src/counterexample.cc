#include "walshlab/counterexample.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "walshlab/parallel.h"
#include "walshlab/walsh.h"

namespace walshlab {
namespace {

void require_open_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be positive");
  }
}

double phi_diag(const WeightFunction& phi, int a) {
  const double t = std::ldexp(1.0, a);
  return phi(t, t);
}

std::vector<double> odd_points(std::uint64_t begin, std::uint64_t end) {
  std::vector<double> out;
  for (std::uint64_t m = begin + 1; m < end; ++m) {
    if (m & 1u) out.push_back(static_cast<double>(m));
  }
  return out;
}

// For odd point i, the index range [lo, hi) of odd points n with (m, n) in the
// cone. The admissible n form an interval containing m itself.
std::pair<std::size_t, std::size_t> cone_range(const std::vector<double>& pts,
                                               std::size_t i, const Cone& cone) {
  const auto m = static_cast<Index>(pts[i]);
  auto inside = [&](std::size_t t) { return cone.contains(m, static_cast<Index>(pts[t])); };
  std::size_t lo = i;
  {
    std::size_t a = 0, b = i;  // first index in [0, i] that is inside
    while (a < b) {
      const std::size_t mid = a + (b - a) / 2;
      if (inside(mid)) b = mid; else a = mid + 1;
    }
    lo = a;
  }
  std::size_t hi = i + 1;
  {
    std::size_t a = i + 1, b = pts.size();  // first index past i that is outside
    while (a < b) {
      const std::size_t mid = a + (b - a) / 2;
      if (inside(mid)) a = mid + 1; else b = mid;
    }
    hi = a;
  }
  return {lo, hi};
}

Cone unbounded_cone(double alpha) {
  return Cone{alpha, std::numeric_limits<Index>::max() / 4,
              std::numeric_limits<Index>::max() / 4};
}

struct BlockSum {
  double sum = 0.0;
  long long pairs = 0;
};

BlockSum block_sum_with_count(std::uint64_t begin, std::uint64_t end, double p,
                              double alpha, const WeightFunction& phi) {
  const std::vector<double> pts = odd_points(begin, end);
  const Cone cone = unbounded_cone(alpha);
  const double q = 2.0 - p;
  BlockSum out;
  if (pts.empty()) return out;

  std::vector<std::pair<std::size_t, std::size_t>> ranges(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ranges[i] = cone_range(pts, i, cone);
    out.pairs += static_cast<long long>(ranges[i].second - ranges[i].first);
  }

  std::vector<double> rows(pts.size());
  if (phi.min_profile()) {
    const auto& g = *phi.min_profile();
    // Prefix sums of n^-q and g(n) n^-q over the odd points.
    std::vector<double> plain(pts.size() + 1, 0.0);
    std::vector<double> weighted(pts.size() + 1, 0.0);
    for (std::size_t t = 0; t < pts.size(); ++t) {
      const double w = std::pow(pts[t], -q);
      plain[t + 1] = plain[t] + w;
      weighted[t + 1] = weighted[t] + g(pts[t]) * w;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto [lo, hi] = ranges[i];
      const double upper = g(pts[i]) * (plain[hi] - plain[i]);
      const double lower = weighted[i] - weighted[lo];
      rows[i] = std::pow(pts[i], -q) * (upper + lower);
    }
  } else {
    parallel_for(0, pts.size(), [&](std::size_t i) {
      const auto [lo, hi] = ranges[i];
      std::vector<double> terms;
      terms.reserve(hi - lo);
      for (std::size_t t = lo; t < hi; ++t) {
        terms.push_back(phi(pts[i], pts[t]) / std::pow(pts[i] * pts[t], q));
      }
      rows[i] = pairwise_sum(std::span<const double>(terms));
    });
  }
  out.sum = pairwise_sum(std::span<const double>(rows));
  return out;
}

}  // namespace

int block_octaves(double alpha) {
  require_alpha(alpha);
  return static_cast<int>(std::floor(alpha)) + 1;
}

AlphaSequence select_alpha_sequence(const WeightFunction& phi, double p,
                                    double alpha, int K, int search_cap) {
  require_open_p(p);
  require_alpha(alpha);
  if (K < 0) throw std::invalid_argument("K must be nonnegative");
  const int gap = block_octaves(alpha) + 1;

  AlphaSequence seq;
  seq.alpha = alpha;
  seq.p = p;
  int a = 2;
  for (int k = 0; k <= K; ++k) {
    const double threshold = std::ldexp(1.0, -k);
    while (a <= search_cap && std::pow(phi_diag(phi, a), -p / 4.0) > threshold) ++a;
    if (a > search_cap) {
      throw std::runtime_error("weight " + phi.name() +
                               " does not reach the threshold for level " +
                               std::to_string(k) + " below search cap " +
                               std::to_string(search_cap));
    }
    seq.entries.push_back(a);
    seq.tail_bound += threshold;
    a += gap;
  }
  return seq;
}

SeparableSum2 CounterexampleAtom::separable() const {
  SeparableSum2 s;
  s.add(scale, factor, factor);
  return s;
}

CounterexampleAtom build_atom(double p, double alpha, int alpha_k,
                              const Limits& limits) {
  require_open_p(p);
  if (alpha_k < 2) throw std::invalid_argument("alpha_k must be >= 2");
  const int s = block_octaves(alpha);
  const Resolution res(alpha_k + s);
  check_cap_1d(res, limits);

  CounterexampleAtom atom;
  atom.alpha_k = alpha_k;
  atom.p = p;
  atom.alpha = alpha;
  atom.scale = std::exp2(alpha_k * (2.0 / p - 2.0) - 2.0 * (s - 1) - 2.0);
  atom.factor = dirichlet_dyadic(alpha_k + s, res, limits) -
                dirichlet_dyadic(alpha_k, res, limits);
  if (res.bits() <= limits.max_bits_per_axis) {
    const Resolution cube(alpha_k);
    atom.grid = Atom{materialize(atom.separable(), res, res, limits), alpha_k,
                     DyadicPoint(cube, 0), DyadicPoint(cube, 0), p};
  }
  return atom;
}

double Counterexample::height(int k) const {
  if (k < 0 || k >= levels()) throw std::out_of_range("block index");
  const int a = seq.entries[static_cast<std::size_t>(k)];
  return std::exp2(a * (2.0 / p() - 2.0)) / std::pow(phi_diag(phi, a), 0.25);
}

std::uint64_t Counterexample::block_begin(int k) const {
  return std::uint64_t{1} << seq.entries.at(static_cast<std::size_t>(k));
}

std::uint64_t Counterexample::block_end(int k) const {
  return std::uint64_t{1}
         << (seq.entries.at(static_cast<std::size_t>(k)) + block_octaves(alpha()));
}

std::optional<int> Counterexample::block_of(Index i) const {
  if (i < 0) return std::nullopt;
  const auto u = static_cast<std::uint64_t>(i);
  for (int k = 0; k < levels(); ++k) {
    if (u >= block_begin(k) && u < block_end(k)) return k;
  }
  return std::nullopt;
}

Counterexample build_counterexample(AlphaSequence seq, const WeightFunction& phi,
                                    const Limits& limits) {
  require_open_p(seq.p);
  require_alpha(seq.alpha);
  if (seq.entries.empty()) throw std::invalid_argument("empty alpha sequence");
  const int s = block_octaves(seq.alpha);
  for (std::size_t k = 0; k < seq.entries.size(); ++k) {
    if (seq.entries[k] < 2) throw std::invalid_argument("alpha_0 must be >= 2");
    if (k > 0 && !(seq.entries[k - 1] + s < seq.entries[k])) {
      throw std::invalid_argument("alpha sequence gaps too small");
    }
  }

  Counterexample ce{std::move(seq), phi, {}, {}, {}, 0.0, std::nullopt};
  double weight_sum = 0.0;
  for (int a : ce.seq.entries) {
    const double lambda = std::ldexp(std::pow(phi_diag(phi, a), -0.25), 2 * s);
    CounterexampleAtom atom = build_atom(ce.p(), ce.alpha(), a, limits);
    ce.separable.add(lambda * atom.scale, atom.factor, atom.factor);
    ce.lambdas.push_back(lambda);
    ce.atoms.push_back(std::move(atom));
    weight_sum += std::pow(lambda, ce.p());
  }
  ce.hp_upper_bound = std::pow(weight_sum, 1.0 / ce.p());

  const Resolution finest(ce.seq.entries.back() + s);
  if (finest.bits() <= limits.max_bits_per_axis) {
    ce.martingale = Martingale2(materialize(ce.separable, finest, finest, limits));
  }
  return ce;
}

Counterexample build_counterexample(double p, double alpha,
                                    const WeightFunction& phi, int K,
                                    const Limits& limits) {
  return build_counterexample(select_alpha_sequence(phi, p, alpha, K), phi, limits);
}

double predicted_coefficient(const Counterexample& ce, Index i, Index j) {
  const auto bi = ce.block_of(i);
  const auto bj = ce.block_of(j);
  if (bi && bj && *bi == *bj) return ce.height(*bi);
  return 0.0;
}

SeparableSum2 block_partial_sum(const Counterexample& ce, Index m, Index n) {
  const auto bm = ce.block_of(m);
  const auto bn = ce.block_of(n);
  if (!bm || !bn || *bm != *bn) {
    throw std::invalid_argument("(m, n) is not inside a coefficient block");
  }
  const int k = *bm;
  const auto begin = ce.block_begin(k);
  if (static_cast<std::uint64_t>(m) == begin || static_cast<std::uint64_t>(n) == begin) {
    throw std::invalid_argument("block partial sums need 2^a_k < m, n");
  }
  SeparableSum2 out;
  for (int eta = 0; eta < k; ++eta) {
    const StepFn1& u = ce.atoms[static_cast<std::size_t>(eta)].factor;
    out.add(ce.height(eta), u, u);
  }
  const int a = ce.seq.entries[static_cast<std::size_t>(k)];
  const Resolution res(a + block_octaves(ce.alpha()));
  const StepFn1 base = dirichlet_dyadic(a, res);
  out.add(ce.height(k),
          dirichlet_closed(static_cast<std::uint64_t>(m), res) - base,
          dirichlet_closed(static_cast<std::uint64_t>(n), res) - base);
  return out;
}

double closed_form_value(const Counterexample& ce, int k, Index m, Index n) {
  if (k < 0 || k >= ce.levels()) throw std::out_of_range("block index");
  if ((m & 1) == 0 || (n & 1) == 0) {
    throw std::invalid_argument("closed form needs odd m and n");
  }
  const auto lo = ce.block_begin(k);
  const auto hi = ce.block_end(k);
  auto inside = [&](Index v) {
    return v > 0 && static_cast<std::uint64_t>(v) > lo && static_cast<std::uint64_t>(v) < hi;
  };
  if (!inside(m) || !inside(n)) throw std::invalid_argument("(m, n) outside block");
  return ce.height(k);
}

double weak_lp_lower_bound(const Counterexample& ce, int k, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  return 0.5 * std::pow(0.25, 1.0 / p) * ce.height(k);
}

OddIndexCounts odd_index_counts(int alpha_k, double alpha) {
  require_alpha(alpha);
  if (alpha_k < 1) throw std::invalid_argument("alpha_k must be >= 1");
  const auto lo = static_cast<long long>(std::ldexp(1.0, alpha_k));
  const auto hi = static_cast<long long>(std::floor(std::exp2(alpha_k + alpha)));
  OddIndexCounts c;
  for (long long m = lo + 1; m <= hi; ++m) c.direct += (m & 1);
  const long long lo2 = lo / 2;
  const auto hi2 = static_cast<long long>(std::floor(std::exp2(alpha_k - 1 + alpha)));
  c.reindexed = std::max(0LL, hi2 - lo2);
  return c;
}

double block_weight_sum_direct(std::uint64_t begin, std::uint64_t end, double p,
                               double alpha, const WeightFunction& phi) {
  // Strip the min-profile so the one-term-per-pair path is taken.
  const WeightFunction generic(phi.name(), [&phi](double m, double n) { return phi(m, n); });
  return block_sum_with_count(begin, end, p, alpha, generic).sum;
}

double block_weight_sum(std::uint64_t begin, std::uint64_t end, double p,
                        double alpha, const WeightFunction& phi) {
  return block_sum_with_count(begin, end, p, alpha, phi).sum;
}

std::vector<DivergenceRow> divergence_table(const Counterexample& ce, double p,
                                            double alpha,
                                            const WeightFunction& phi,
                                            int k_max, const Limits& limits) {
  require_open_p(p);
  require_alpha(alpha);
  if (k_max < 0 || k_max >= ce.levels()) {
    throw std::out_of_range("k_max exceeds the constructed levels");
  }
  const double q = 2.0 - p;
  std::vector<DivergenceRow> rows;
  for (int k = 0; k <= k_max; ++k) {
    DivergenceRow row;
    row.k = k;
    row.alpha_k = ce.seq.entries[static_cast<std::size_t>(k)];
    row.lambda_k = ce.lambdas[static_cast<std::size_t>(k)];
    row.v_k = ce.height(k);
    row.lower_bound = weak_lp_lower_bound(ce, k, p);
    row.phi_diag = phi_diag(phi, row.alpha_k);

    const BlockSum block =
        block_sum_with_count(ce.block_begin(k), ce.block_end(k), p, alpha, phi);
    row.pairs = block.pairs;
    row.t_k = std::pow(row.lower_bound, p) * block.sum;

    const double width = std::exp2(alpha - 1.0) - 0.5 - std::ldexp(1.0, -row.alpha_k);
    const double c_p = std::pow(0.5, p) * 0.25 * width * width;
    row.g_k = c_p * std::pow(row.phi_diag, 0.75);

    const int res_bits = row.alpha_k + block_octaves(ce.alpha());
    if (res_bits <= limits.max_bits_per_axis) {
      const Resolution res(res_bits);
      const std::vector<double> pts = odd_points(ce.block_begin(k), ce.block_end(k));
      const Cone cone = unbounded_cone(alpha);
      std::vector<std::pair<Index, Index>> pairs;
      for (double m : pts) {
        for (double n : pts) {
          if (cone.contains(static_cast<Index>(m), static_cast<Index>(n))) {
            pairs.emplace_back(static_cast<Index>(m), static_cast<Index>(n));
          }
        }
      }
      std::vector<double> weak(pairs.size());
      std::vector<double> strong(pairs.size());
      parallel_for(0, pairs.size(), [&](std::size_t i) {
        const auto [m, n] = pairs[i];
        const StepFn2 s = materialize(block_partial_sum(ce, m, n), res, res, limits);
        const double w = phi(static_cast<double>(m), static_cast<double>(n)) /
                         std::pow(static_cast<double>(m) * static_cast<double>(n), q);
        weak[i] = std::pow(weak_lp_quasinorm(s, p), p) * w;
        strong[i] = std::pow(lp_quasinorm(s, p), p) * w;
      });
      row.exact = true;
      row.exact_weak = pairwise_sum(std::span<const double>(weak));
      row.exact_strong = pairwise_sum(std::span<const double>(strong));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace walshlab
