#ifndef WALSHLAB_DYADIC_H_
#define WALSHLAB_DYADIC_H_

// Dyadic points, cells and piecewise-constant functions on G and G x G.
//
// Cell-index convention: at resolution n, cell j holds the points whose first
// n coordinates are x_k = bit (n-1-k) of j, so x_0 is the most significant
// bit. The dyadic interval I_m(0) is then the leading block of 2^(n-m) cells
// and refining a function replicates each value 2^extra times.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "walshlab/parallel.h"

namespace walshlab {

using Index = Eigen::Index;

// Resolution caps. These are configuration: every constructor that allocates
// a grid takes a Limits and refuses to exceed it.
struct Limits {
  int max_bits_1d = 24;
  int max_bits_per_axis = 12;
};

class ResolutionCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Number of resolved dyadic coordinates; the cell measure is 2^-bits.
class Resolution {
 public:
  constexpr Resolution() = default;
  explicit Resolution(int bits) : bits_(bits) {
    if (bits < 0 || bits > 62) {
      throw std::invalid_argument("resolution bits out of range: " +
                                  std::to_string(bits));
    }
  }

  int bits() const { return bits_; }
  Index cells() const { return Index{1} << bits_; }
  double cell_measure() const { return std::ldexp(1.0, -bits_); }

  friend auto operator<=>(Resolution, Resolution) = default;

 private:
  int bits_ = 0;
};

inline void check_cap_1d(Resolution r, const Limits& limits) {
  if (r.bits() > limits.max_bits_1d) {
    throw ResolutionCapError("1D resolution " + std::to_string(r.bits()) +
                             " exceeds cap " +
                             std::to_string(limits.max_bits_1d));
  }
}

inline void check_cap_2d(Resolution rx, Resolution ry, const Limits& limits) {
  if (rx.bits() > limits.max_bits_per_axis ||
      ry.bits() > limits.max_bits_per_axis) {
    throw ResolutionCapError("2D resolution (" + std::to_string(rx.bits()) +
                             "," + std::to_string(ry.bits()) +
                             ") exceeds per-axis cap " +
                             std::to_string(limits.max_bits_per_axis));
  }
}

// A point of G known to `resolution` coordinates, i.e. the cell
// I_bits(x). Stored as its cell index.
class DyadicPoint {
 public:
  DyadicPoint(Resolution res, std::uint64_t cell) : res_(res), cell_(cell) {
    if (res.bits() < 64 && (cell >> res.bits()) != 0) {
      throw std::out_of_range("cell index outside resolution");
    }
  }

  static DyadicPoint from_coords(std::span<const int> coords) {
    const Resolution res(static_cast<int>(coords.size()));
    std::uint64_t cell = 0;
    for (int c : coords) {
      if (c != 0 && c != 1) throw std::invalid_argument("coordinate not in {0,1}");
      cell = (cell << 1) | static_cast<std::uint64_t>(c);
    }
    return DyadicPoint(res, cell);
  }

  // e_n: n-th coordinate 1, the rest 0.
  static DyadicPoint generator(int n, Resolution res) {
    if (n < 0 || n >= res.bits()) {
      throw std::out_of_range("generator index must be below resolution");
    }
    return DyadicPoint(res, std::uint64_t{1} << (res.bits() - 1 - n));
  }

  Resolution resolution() const { return res_; }
  std::uint64_t cell() const { return cell_; }

  int coord(int k) const {
    if (k < 0 || k >= res_.bits()) throw std::out_of_range("coordinate index");
    return static_cast<int>((cell_ >> (res_.bits() - 1 - k)) & 1u);
  }

  // Index of the cell containing this point at a coarser resolution.
  std::uint64_t cell_at(Resolution coarser) const {
    if (coarser > res_) {
      throw std::invalid_argument("point is under-resolved for lookup");
    }
    return cell_ >> (res_.bits() - coarser.bits());
  }

  friend bool operator==(const DyadicPoint&, const DyadicPoint&) = default;

 private:
  Resolution res_;
  std::uint64_t cell_ = 0;
};

// Piecewise-constant function on G, constant on cells of the given resolution.
template <typename Scalar>
class BasicStepFn1 {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicStepFn1() : BasicStepFn1(Resolution(0), Vector::Zero(1)) {}

  BasicStepFn1(Resolution res, Vector values, const Limits& limits = {})
      : res_(res), values_(std::move(values)) {
    check_cap_1d(res, limits);
    if (values_.size() != res.cells()) {
      throw std::invalid_argument("value count does not match resolution");
    }
  }

  static BasicStepFn1 constant(Resolution res, Scalar c,
                               const Limits& limits = {}) {
    check_cap_1d(res, limits);
    return BasicStepFn1(res, Vector::Constant(res.cells(), c), limits);
  }
  static BasicStepFn1 zeros(Resolution res, const Limits& limits = {}) {
    return constant(res, Scalar(0), limits);
  }

  Resolution resolution() const { return res_; }
  const Vector& values() const { return values_; }
  Scalar operator[](Index cell) const { return values_[cell]; }

  Scalar operator()(const DyadicPoint& x) const {
    return values_[static_cast<Index>(x.cell_at(res_))];
  }

  BasicStepFn1 refined(Resolution finer, const Limits& limits = {}) const {
    if (finer < res_) throw std::invalid_argument("cannot refine to coarser");
    check_cap_1d(finer, limits);
    const int extra = finer.bits() - res_.bits();
    if (extra == 0) return *this;
    Vector out(finer.cells());
    for (Index j = 0; j < out.size(); ++j) out[j] = values_[j >> extra];
    return BasicStepFn1(finer, std::move(out), limits);
  }

  BasicStepFn1 operator-() const { return BasicStepFn1(res_, -values_); }

  friend BasicStepFn1 operator*(Scalar c, const BasicStepFn1& f) {
    return BasicStepFn1(f.res_, c * f.values_);
  }
  friend BasicStepFn1 operator*(const BasicStepFn1& f, Scalar c) {
    return c * f;
  }

  // Binary operations work on the common refinement.
  friend BasicStepFn1 operator+(const BasicStepFn1& a, const BasicStepFn1& b) {
    const Resolution r = std::max(a.res_, b.res_);
    return BasicStepFn1(r, a.refined(r).values_ + b.refined(r).values_);
  }
  friend BasicStepFn1 operator-(const BasicStepFn1& a, const BasicStepFn1& b) {
    const Resolution r = std::max(a.res_, b.res_);
    return BasicStepFn1(r, a.refined(r).values_ - b.refined(r).values_);
  }
  friend BasicStepFn1 operator*(const BasicStepFn1& a, const BasicStepFn1& b) {
    const Resolution r = std::max(a.res_, b.res_);
    return BasicStepFn1(
        r, a.refined(r).values_.cwiseProduct(b.refined(r).values_));
  }

  friend bool operator==(const BasicStepFn1& a, const BasicStepFn1& b) {
    return a.res_ == b.res_ && a.values_ == b.values_;
  }

 private:
  Resolution res_;
  Vector values_;
};

// Piecewise-constant function on G x G. Rows follow x cells, columns y cells.
template <typename Scalar>
class BasicStepFn2 {
 public:
  using Matrix =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  BasicStepFn2() : BasicStepFn2(Resolution(0), Resolution(0), Matrix::Zero(1, 1)) {}

  BasicStepFn2(Resolution res_x, Resolution res_y, Matrix values,
               const Limits& limits = {})
      : res_x_(res_x), res_y_(res_y), values_(std::move(values)) {
    check_cap_2d(res_x, res_y, limits);
    if (values_.rows() != res_x.cells() || values_.cols() != res_y.cells()) {
      throw std::invalid_argument("value shape does not match resolution");
    }
  }

  static BasicStepFn2 constant(Resolution rx, Resolution ry, Scalar c,
                               const Limits& limits = {}) {
    check_cap_2d(rx, ry, limits);
    return BasicStepFn2(rx, ry, Matrix::Constant(rx.cells(), ry.cells(), c),
                        limits);
  }
  static BasicStepFn2 zeros(Resolution rx, Resolution ry,
                            const Limits& limits = {}) {
    return constant(rx, ry, Scalar(0), limits);
  }

  Resolution res_x() const { return res_x_; }
  Resolution res_y() const { return res_y_; }
  const Matrix& values() const { return values_; }
  Scalar operator()(Index row, Index col) const { return values_(row, col); }

  Scalar at(const DyadicPoint& x, const DyadicPoint& y) const {
    return values_(static_cast<Index>(x.cell_at(res_x_)),
                   static_cast<Index>(y.cell_at(res_y_)));
  }

  BasicStepFn2 refined(Resolution rx, Resolution ry,
                       const Limits& limits = {}) const {
    if (rx < res_x_ || ry < res_y_) {
      throw std::invalid_argument("cannot refine to coarser");
    }
    check_cap_2d(rx, ry, limits);
    const int ex = rx.bits() - res_x_.bits();
    const int ey = ry.bits() - res_y_.bits();
    if (ex == 0 && ey == 0) return *this;
    Matrix out(rx.cells(), ry.cells());
    for (Index i = 0; i < out.rows(); ++i) {
      for (Index j = 0; j < out.cols(); ++j) {
        out(i, j) = values_(i >> ex, j >> ey);
      }
    }
    return BasicStepFn2(rx, ry, std::move(out), limits);
  }

  std::span<const Scalar> flat() const {
    return {values_.data(), static_cast<std::size_t>(values_.size())};
  }

  BasicStepFn2 operator-() const { return BasicStepFn2(res_x_, res_y_, -values_); }

  friend BasicStepFn2 operator*(Scalar c, const BasicStepFn2& f) {
    return BasicStepFn2(f.res_x_, f.res_y_, c * f.values_);
  }
  friend BasicStepFn2 operator+(const BasicStepFn2& a, const BasicStepFn2& b) {
    const Resolution rx = std::max(a.res_x_, b.res_x_);
    const Resolution ry = std::max(a.res_y_, b.res_y_);
    return BasicStepFn2(rx, ry,
                        a.refined(rx, ry).values_ + b.refined(rx, ry).values_);
  }
  friend BasicStepFn2 operator-(const BasicStepFn2& a, const BasicStepFn2& b) {
    return a + (-b);
  }

  friend bool operator==(const BasicStepFn2& a, const BasicStepFn2& b) {
    return a.res_x_ == b.res_x_ && a.res_y_ == b.res_y_ &&
           a.values_ == b.values_;
  }

 private:
  Resolution res_x_;
  Resolution res_y_;
  Matrix values_;
};

using StepFn1 = BasicStepFn1<double>;
using StepFn2 = BasicStepFn2<double>;

namespace detail {

template <typename Scalar>
Scalar sum_flat(const Scalar* data, Index n) {
  return pairwise_sum(std::span<const Scalar>(data, static_cast<std::size_t>(n)));
}

template <typename Scalar>
void check_exponent(Scalar p) {
  if (!(p > Scalar(0)) || !std::isfinite(static_cast<double>(p))) {
    throw std::invalid_argument("exponent p must be positive and finite");
  }
}

// (mean of |v|^p)^(1/p) with the cell measure folded in.
template <typename Scalar>
Scalar lp_of(const Scalar* data, Index n, double cell_measure, Scalar p) {
  check_exponent(p);
  std::vector<Scalar> powered(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const Scalar a = std::abs(data[i]);
    powered[static_cast<std::size_t>(i)] = p == Scalar(1) ? a : std::pow(a, p);
  }
  const Scalar integral =
      pairwise_sum(std::span<const Scalar>(powered)) * Scalar(cell_measure);
  return p == Scalar(1) ? integral : std::pow(integral, Scalar(1) / p);
}

// max over distinct levels v > 0 of v * mu(|f| >= v)^(1/p). For a simple
// function this equals sup_{lambda>0} lambda * mu(|f| > lambda)^(1/p).
template <typename Scalar>
Scalar weak_lp_of(const Scalar* data, Index n, double cell_measure, Scalar p) {
  check_exponent(p);
  std::vector<Scalar> mags(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) mags[static_cast<std::size_t>(i)] = std::abs(data[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  Scalar best = Scalar(0);
  for (std::size_t i = 0; i < mags.size(); ++i) {
    const Scalar v = mags[i];
    if (!(v > Scalar(0))) break;
    if (i + 1 < mags.size() && mags[i + 1] == v) continue;  // end of level group
    const Scalar measure = Scalar(static_cast<double>(i + 1) * cell_measure);
    const Scalar candidate =
        v * (p == Scalar(1) ? measure : std::pow(measure, Scalar(1) / p));
    best = std::max(best, candidate);
  }
  return best;
}

}  // namespace detail

template <typename Scalar>
Scalar integrate(const BasicStepFn1<Scalar>& f) {
  return detail::sum_flat(f.values().data(), f.values().size()) *
         Scalar(f.resolution().cell_measure());
}

template <typename Scalar>
Scalar integrate(const BasicStepFn2<Scalar>& f) {
  return detail::sum_flat(f.values().data(), f.values().size()) *
         Scalar(f.res_x().cell_measure() * f.res_y().cell_measure());
}

template <typename Scalar>
Scalar lp_quasinorm(const BasicStepFn1<Scalar>& f, Scalar p) {
  return detail::lp_of(f.values().data(), f.values().size(),
                       f.resolution().cell_measure(), p);
}

template <typename Scalar>
Scalar lp_quasinorm(const BasicStepFn2<Scalar>& f, Scalar p) {
  return detail::lp_of(f.values().data(), f.values().size(),
                       f.res_x().cell_measure() * f.res_y().cell_measure(), p);
}

template <typename Scalar>
Scalar weak_lp_quasinorm(const BasicStepFn1<Scalar>& f, Scalar p) {
  return detail::weak_lp_of(f.values().data(), f.values().size(),
                            f.resolution().cell_measure(), p);
}

template <typename Scalar>
Scalar weak_lp_quasinorm(const BasicStepFn2<Scalar>& f, Scalar p) {
  return detail::weak_lp_of(
      f.values().data(), f.values().size(),
      f.res_x().cell_measure() * f.res_y().cell_measure(), p);
}

template <typename Scalar>
BasicStepFn2<Scalar> tensor_product(const BasicStepFn1<Scalar>& g,
                                    const BasicStepFn1<Scalar>& h,
                                    const Limits& limits = {}) {
  check_cap_2d(g.resolution(), h.resolution(), limits);
  typename BasicStepFn2<Scalar>::Matrix m = g.values() * h.values().transpose();
  return BasicStepFn2<Scalar>(g.resolution(), h.resolution(), std::move(m),
                              limits);
}

// Indicator of G \ I_n = {x : (x_0, ..., x_{n-1}) != 0}.
inline StepFn1 complement_indicator(int n, Resolution res,
                                    const Limits& limits = {}) {
  if (n < 0 || n > res.bits()) {
    throw std::out_of_range("complement_indicator: n must be in [0, bits]");
  }
  StepFn1::Vector v(res.cells());
  const int shift = res.bits() - n;
  for (Index j = 0; j < v.size(); ++j) v[j] = (n > 0 && (j >> shift) != 0) ? 1.0 : 0.0;
  return StepFn1(res, std::move(v), limits);
}

// Sum of rank-one terms c_i * gx_i(x) * hy_i(y). The factors may live at
// different resolutions.
struct SeparableTerm {
  double coefficient = 0.0;
  StepFn1 gx;
  StepFn1 hy;
};

class SeparableSum2 {
 public:
  SeparableSum2() = default;
  explicit SeparableSum2(std::vector<SeparableTerm> terms)
      : terms_(std::move(terms)) {}

  void add(double coefficient, StepFn1 gx, StepFn1 hy) {
    terms_.push_back({coefficient, std::move(gx), std::move(hy)});
  }

  const std::vector<SeparableTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Resolution finest_x() const {
    Resolution r(0);
    for (const auto& t : terms_) r = std::max(r, t.gx.resolution());
    return r;
  }
  Resolution finest_y() const {
    Resolution r(0);
    for (const auto& t : terms_) r = std::max(r, t.hy.resolution());
    return r;
  }

 private:
  std::vector<SeparableTerm> terms_;
};

// Pointwise sum of the separable terms on the (rx, ry) grid. Each cell
// accumulates (c * g) * h term by term, in term order.
inline StepFn2 materialize(const SeparableSum2& s, Resolution rx, Resolution ry,
                           const Limits& limits = {}) {
  check_cap_2d(rx, ry, limits);
  if (rx < s.finest_x() || ry < s.finest_y()) {
    throw std::invalid_argument("materialize: grid coarser than a factor");
  }
  StepFn2::Matrix out = StepFn2::Matrix::Zero(rx.cells(), ry.cells());
  for (const auto& t : s.terms()) {
    const StepFn1 g = t.gx.refined(rx, limits);
    const StepFn1 h = t.hy.refined(ry, limits);
    parallel_for(0, static_cast<std::size_t>(out.rows()), [&](std::size_t i) {
      const double cg = t.coefficient * g[static_cast<Index>(i)];
      for (Index j = 0; j < out.cols(); ++j) {
        out(static_cast<Index>(i), j) += cg * h[j];
      }
    });
  }
  return StepFn2(rx, ry, std::move(out), limits);
}

inline double evaluate_at(const SeparableSum2& s, const DyadicPoint& x,
                          const DyadicPoint& y) {
  if (x.resolution() < s.finest_x() || y.resolution() < s.finest_y()) {
    throw std::invalid_argument("evaluate_at: point is under-resolved");
  }
  double acc = 0.0;
  for (const auto& t : s.terms()) acc += (t.coefficient * t.gx(x)) * t.hy(y);
  return acc;
}

}  // namespace walshlab

#endif  // WALSHLAB_DYADIC_H_
