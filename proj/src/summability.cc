#include "walshlab/summability.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "walshlab/parallel.h"

namespace walshlab {
namespace {

void require_p(double p, bool allow_one) {
  const bool ok = allow_one ? (p > 0.0 && p <= 1.0) : (p > 0.0 && p < 1.0);
  if (!ok) {
    throw std::invalid_argument(allow_one ? "p must lie in (0, 1]"
                                          : "p must lie in (0, 1)");
  }
}

bool is_integer(double a) { return std::floor(a) == a; }

// ceil(v / 2^shift) for v >= 1.
Index ceil_shift(Index v, int shift) {
  if (shift >= 62) return 1;
  const Index q = v >> shift;
  return q + ((v & ((Index{1} << shift) - 1)) != 0 ? 1 : 0);
}

}  // namespace

const char* to_string(NormKind kind) {
  return kind == NormKind::kStrong ? "strong" : "weak";
}

NormKind norm_kind_from_string(const std::string& s) {
  if (s == "strong") return NormKind::kStrong;
  if (s == "weak") return NormKind::kWeak;
  throw std::invalid_argument("unknown norm kind: " + s);
}

bool Cone::contains(Index k, Index l) const {
  if (k < 1 || l < 1 || k > n || l > m) return false;
  if (is_integer(alpha)) {
    const int a = static_cast<int>(alpha);
    return k >= ceil_shift(l, a) && l >= ceil_shift(k, a);
  }
  const double scale = std::exp2(alpha);
  return static_cast<double>(k) * scale >= static_cast<double>(l) &&
         static_cast<double>(l) * scale >= static_cast<double>(k);
}

std::vector<std::pair<Index, Index>> cone_indices(double alpha, Index n, Index m) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("cone aperture must be >= 0");
  if (n < 1 || m < 1) throw std::invalid_argument("cone bounds must be >= 1");
  const Cone cone{alpha, n, m};
  std::vector<std::pair<Index, Index>> out;
  for (Index k = 1; k <= n; ++k) {
    for (Index l = 1; l <= m; ++l) {
      if (cone.contains(k, l)) out.emplace_back(k, l);
    }
  }
  return out;
}

WeightFunction WeightFunction::of_min(std::string name, Profile g) {
  WeightFunction w(std::move(name),
                   [g](double m, double n) { return g(std::min(m, n)); });
  w.min_profile_ = std::move(g);
  return w;
}

WeightFunction log4_weight() {
  return WeightFunction::of_min("log4", [](double t) {
    return std::pow(1.0 + std::log2(1.0 + t), 4.0);
  });
}

WeightFunction loglog_weight() {
  return WeightFunction::of_min("loglog", [](double t) {
    return std::pow(1.0 + std::log2(1.0 + std::log2(1.0 + t)), 4.0);
  });
}

WeightFunction constant_weight(double c) {
  return WeightFunction::of_min("const:" + std::to_string(c),
                                [c](double) { return c; });
}

WeightFunction weight_from_name(const std::string& name) {
  if (name == "log4") return log4_weight();
  if (name == "loglog") return loglog_weight();
  if (name.rfind("const:", 0) == 0) {
    std::size_t used = 0;
    const std::string tail = name.substr(6);
    double c = 0.0;
    try {
      c = std::stod(tail, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == tail.size() && used > 0) return constant_weight(c);
  }
  throw std::invalid_argument("unknown weight function: " + name);
}

WeightReport validate_weight(const WeightFunction& phi, Index grid_max) {
  if (grid_max < 2) throw std::invalid_argument("grid_max must be >= 2");
  std::vector<double> grid;
  for (Index g = 1; g <= grid_max; g *= 2) grid.push_back(static_cast<double>(g));
  if (grid.back() != static_cast<double>(grid_max)) {
    grid.push_back(static_cast<double>(grid_max));
  }
  const std::size_t g = grid.size();
  std::vector<double> values(g * g);
  for (std::size_t a = 0; a < g; ++a) {
    for (std::size_t b = 0; b < g; ++b) values[a * g + b] = phi(grid[a], grid[b]);
  }

  WeightReport r;
  r.min_value = *std::min_element(values.begin(), values.end());
  r.at_least_one = r.min_value >= 1.0;
  for (std::size_t a1 = 0; a1 < g; ++a1) {
    for (std::size_t b1 = 0; b1 < g; ++b1) {
      for (std::size_t a2 = 0; a2 <= a1; ++a2) {
        for (std::size_t b2 = 0; b2 <= b1; ++b2) {
          if (values[a1 * g + b1] < values[a2 * g + b2]) ++r.monotone_violations;
        }
      }
    }
  }
  r.monotone = r.monotone_violations == 0;
  const double top = values[(g - 1) * g + (g - 1)];
  const double below = values[(g - 2) * g + (g - 2)];
  r.largest_diagonal = top;
  r.diverging_on_grid = top > below && top > values[0];
  return r;
}

PartialSumNorms::PartialSumNorms(const Martingale2& f, double p, NormKind kind)
    : spectrum_(forward_transform(f.finest())),
      p_(p),
      kind_(kind),
      side_(f.finest().res_x().cells()) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  cache_.assign(static_cast<std::size_t>((side_ + 1) * (side_ + 1)),
                std::numeric_limits<double>::quiet_NaN());
}

double PartialSumNorms::compute(Index k, Index l) const {
  if (k == 0 || l == 0) return 0.0;
  const StepFn2 s = rectangular_partial_sum(spectrum_, k, l);
  if (kind_ == NormKind::kStrong) {
    const double q = lp_quasinorm(s, p_);
    return p_ == 1.0 ? q : std::pow(q, p_);
  }
  return std::pow(weak_lp_quasinorm(s, p_), p_);
}

double PartialSumNorms::powered(Index k, Index l) {
  if (k < 0 || l < 0) throw std::out_of_range("negative partial sum index");
  const Index ck = clamp(k);
  const Index cl = clamp(l);
  double& slot = cache_[static_cast<std::size_t>(ck * (side_ + 1) + cl)];
  if (std::isnan(slot)) slot = compute(ck, cl);
  return slot;
}

void PartialSumNorms::prefetch(const std::vector<std::pair<Index, Index>>& pairs) {
  std::vector<Index> missing;
  for (const auto& [k, l] : pairs) {
    const Index key = clamp(k) * (side_ + 1) + clamp(l);
    double& slot = cache_[static_cast<std::size_t>(key)];
    if (std::isnan(slot)) {
      slot = -1.0;  // claimed
      missing.push_back(key);
    }
  }
  std::vector<double> results(missing.size());
  parallel_for(0, missing.size(), [&](std::size_t i) {
    results[i] = compute(missing[i] / (side_ + 1), missing[i] % (side_ + 1));
  });
  for (std::size_t i = 0; i < missing.size(); ++i) {
    cache_[static_cast<std::size_t>(missing[i])] = results[i];
  }
}

double cone_term(double powered_norm, Index k, Index l, double p) {
  return powered_norm /
         std::pow(static_cast<double>(k) * static_cast<double>(l), 2.0 - p);
}

double weisz_inner_sum(PartialSumNorms& norms, double alpha, Index n, Index m) {
  const auto pairs = cone_indices(alpha, n, m);
  norms.prefetch(pairs);
  std::vector<double> terms;
  terms.reserve(pairs.size());
  for (const auto& [k, l] : pairs) {
    terms.push_back(cone_term(norms.powered(k, l), k, l, norms.p()));
  }
  return pairwise_sum(std::span<const double>(terms));
}

double weisz_functional(PartialSumNorms& norms, double alpha, Index n, Index m) {
  require_p(norms.p(), true);
  if (n < 2 || m < 2) throw std::invalid_argument("weisz functional needs n, m >= 2");
  const double inner = weisz_inner_sum(norms, alpha, n, m);
  if (std::floor(norms.p()) == 1.0) {
    return inner / (std::log2(static_cast<double>(n)) * std::log2(static_cast<double>(m)));
  }
  return inner;
}

double weisz_functional(const Martingale2& f, double p, double alpha, Index n,
                        Index m, NormKind kind) {
  require_p(p, true);
  if (n < 2 || m < 2) throw std::invalid_argument("weisz functional needs n, m >= 2");
  PartialSumNorms norms(f, p, kind);
  return weisz_functional(norms, alpha, n, m);
}

const char* to_string(Variant v) {
  switch (v) {
    case Variant::kW1: return "W1";
    case Variant::kW2: return "W2";
    case Variant::kTH: return "TH";
    case Variant::kTH1: return "TH1";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "W1") return Variant::kW1;
  if (s == "W2") return Variant::kW2;
  if (s == "TH") return Variant::kTH;
  if (s == "TH1") return Variant::kTH1;
  throw std::invalid_argument("unknown variant: " + s);
}

double diagonal_variant_sum(const Martingale2& f, Variant variant, double p,
                            Index N, bool include_prefactor) {
  const bool needs_one = variant == Variant::kW1 || variant == Variant::kTH;
  if (needs_one ? p != 1.0 : !(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument(std::string("p does not match variant ") +
                                to_string(variant));
  }
  if (N < 2) throw std::invalid_argument("variant sums need N >= 2");

  PartialSumNorms norms(f, p, NormKind::kStrong);
  const Index first = variant == Variant::kTH ? 2 : 1;
  std::vector<std::pair<Index, Index>> diag;
  for (Index k = first; k <= N; ++k) diag.emplace_back(k, k);
  norms.prefetch(diag);

  std::vector<double> terms;
  terms.reserve(diag.size());
  for (Index k = first; k <= N; ++k) {
    const double norm = norms.powered(k, k);
    const double kd = static_cast<double>(k);
    switch (variant) {
      case Variant::kW1:
      case Variant::kW2:
        // k^2 and k^(4-2p) are both (k k)^(2-p).
        terms.push_back(cone_term(norm, k, k, p));
        break;
      case Variant::kTH: {
        const double lg = std::log2(kd);
        terms.push_back(norm / (kd * lg * lg));
        break;
      }
      case Variant::kTH1:
        terms.push_back(norm / std::pow(kd, 3.0 - 2.0 * p));
        break;
    }
  }
  const double sum = pairwise_sum(std::span<const double>(terms));
  if (variant == Variant::kW1 && include_prefactor) {
    const double lg = std::log2(static_cast<double>(N));
    return sum / (lg * lg);
  }
  return sum;
}

double phi_cone_sum(PartialSumNorms& norms, double alpha,
                    const WeightFunction& phi, Index n, Index m) {
  require_p(norms.p(), false);
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (n < 1 || m < 1) throw std::invalid_argument("cone bounds must be >= 1");
  const auto pairs = cone_indices(alpha, n, m);
  norms.prefetch(pairs);
  std::vector<double> terms;
  terms.reserve(pairs.size());
  for (const auto& [k, l] : pairs) {
    terms.push_back(cone_term(norms.powered(k, l), k, l, norms.p()) *
                    phi(static_cast<double>(k), static_cast<double>(l)));
  }
  return pairwise_sum(std::span<const double>(terms));
}

double phi_cone_sum(const Martingale2& f, double p, double alpha,
                    const WeightFunction& phi, Index n, Index m, NormKind kind) {
  require_p(p, false);
  PartialSumNorms norms(f, p, kind);
  return phi_cone_sum(norms, alpha, phi, n, m);
}

}  // namespace walshlab
