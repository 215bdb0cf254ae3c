#ifndef WALSHLAB_WALSH_H_
#define WALSHLAB_WALSH_H_

// Rademacher and Walsh-Paley functions, Walsh-Dirichlet kernels and the fast
// Walsh transform in Paley order.
//
// With x_0 stored in the most significant bit of the cell index, the value of
// w_n on cell j is (-1)^popcount(n & rev(j)), where rev reverses the `bits`
// low bits. The forward transform therefore bit-reverses the samples and then
// runs the natural-order Hadamard butterfly; the inverse runs the butterfly
// and bit-reverses the result.

#include <Eigen/Core>

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "walshlab/dyadic.h"
#include "walshlab/parallel.h"

namespace walshlab {

inline std::uint64_t bit_reverse(std::uint64_t v, int bits) {
  std::uint64_t r = 0;
  for (int k = 0; k < bits; ++k) {
    r = (r << 1) | (v & 1u);
    v >>= 1;
  }
  return r;
}

// w_n on cell j at the given resolution, as +1/-1.
inline int walsh_sign(std::uint64_t n, std::uint64_t cell, int bits) {
  return (std::popcount(n & bit_reverse(cell, bits)) & 1) ? -1 : 1;
}

template <typename Scalar>
class BasicSpectrum1 {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicSpectrum1(Resolution res, Vector coeffs) : res_(res), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != res.cells()) {
      throw std::invalid_argument("coefficient count does not match resolution");
    }
  }

  Resolution resolution() const { return res_; }
  const Vector& coeffs() const { return coeffs_; }
  Scalar operator[](Index i) const { return coeffs_[i]; }

 private:
  Resolution res_;
  Vector coeffs_;
};

template <typename Scalar>
class BasicSpectrum2 {
 public:
  using Matrix =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  BasicSpectrum2(Resolution res_x, Resolution res_y, Matrix coeffs)
      : res_x_(res_x), res_y_(res_y), coeffs_(std::move(coeffs)) {
    if (coeffs_.rows() != res_x.cells() || coeffs_.cols() != res_y.cells()) {
      throw std::invalid_argument("coefficient shape does not match resolution");
    }
  }

  Resolution res_x() const { return res_x_; }
  Resolution res_y() const { return res_y_; }
  const Matrix& coeffs() const { return coeffs_; }
  Scalar operator()(Index i, Index j) const { return coeffs_(i, j); }

 private:
  Resolution res_x_;
  Resolution res_y_;
  Matrix coeffs_;
};

using Spectrum1 = BasicSpectrum1<double>;
using Spectrum2 = BasicSpectrum2<double>;

// ---------------------------------------------------------------------------
// Transform core

// In-place unnormalized Hadamard butterfly, natural order.
template <typename Scalar>
void fwht_inplace(std::span<Scalar> v) {
  const std::size_t n = v.size();
  if (n & (n - 1)) throw std::invalid_argument("fwht length must be a power of two");
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      Scalar* a = v.data() + i;
      Scalar* b = a + h;
      for (std::size_t j = 0; j < h; ++j) {
        const Scalar x = a[j];
        const Scalar y = b[j];
        a[j] = x + y;
        b[j] = x - y;
      }
    }
  }
}

template <typename Scalar>
void bit_reverse_permute(std::span<Scalar> v) {
  const std::size_t n = v.size();
  const int bits = std::countr_zero(n);
  // Reversed counter: adding 1 at the top bit and propagating the carry down.
  std::size_t r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < r) std::swap(v[i], v[r]);
    std::size_t mask = n >> 1;
    while (bits > 0 && (r & mask)) {
      r ^= mask;
      mask >>= 1;
    }
    r |= mask;
  }
}

namespace detail {

// Butterfly across rows of a row-major matrix: the column transform, done a
// full row at a time.
template <typename Matrix>
void fwht_columns(Matrix& m) {
  using Scalar = typename Matrix::Scalar;
  const Index n = m.rows();
  const Index cols = m.cols();
  for (Index h = 1; h < n; h <<= 1) {
    for (Index i = 0; i < n; i += h << 1) {
      for (Index j = i; j < i + h; ++j) {
        Scalar* a = m.row(j).data();
        Scalar* b = m.row(j + h).data();
        for (Index c = 0; c < cols; ++c) {
          const Scalar x = a[c];
          const Scalar y = b[c];
          a[c] = x + y;
          b[c] = x - y;
        }
      }
    }
  }
}

template <typename Matrix>
void permute_rows(Matrix& m) {
  const Index n = m.rows();
  const int bits = std::countr_zero(static_cast<std::uint64_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto r = static_cast<Index>(bit_reverse(static_cast<std::uint64_t>(i), bits));
    if (i < r) m.row(i).swap(m.row(r));
  }
}

template <typename Matrix>
void transform_rows(Matrix& m, bool permute_before, bool permute_after) {
  using Scalar = typename Matrix::Scalar;
  parallel_for(0, static_cast<std::size_t>(m.rows()), [&](std::size_t i) {
    std::span<Scalar> row(m.row(static_cast<Index>(i)).data(),
                          static_cast<std::size_t>(m.cols()));
    if (permute_before) bit_reverse_permute(row);
    fwht_inplace(row);
    if (permute_after) bit_reverse_permute(row);
  });
}

}  // namespace detail

template <typename Scalar>
BasicSpectrum1<Scalar> forward_transform(const BasicStepFn1<Scalar>& f) {
  typename BasicSpectrum1<Scalar>::Vector c = f.values();
  std::span<Scalar> view(c.data(), static_cast<std::size_t>(c.size()));
  bit_reverse_permute(view);
  fwht_inplace(view);
  c *= Scalar(f.resolution().cell_measure());
  return BasicSpectrum1<Scalar>(f.resolution(), std::move(c));
}

template <typename Scalar>
BasicStepFn1<Scalar> inverse_transform(const BasicSpectrum1<Scalar>& s,
                                       const Limits& limits = {}) {
  typename BasicStepFn1<Scalar>::Vector v = s.coeffs();
  std::span<Scalar> view(v.data(), static_cast<std::size_t>(v.size()));
  fwht_inplace(view);
  bit_reverse_permute(view);
  return BasicStepFn1<Scalar>(s.resolution(), std::move(v), limits);
}

// Rows then columns. The row/column order does not change the result beyond
// rounding.
template <typename Scalar>
BasicSpectrum2<Scalar> forward_transform(const BasicStepFn2<Scalar>& f) {
  typename BasicSpectrum2<Scalar>::Matrix c = f.values();
  detail::transform_rows(c, /*permute_before=*/true, /*permute_after=*/false);
  detail::permute_rows(c);
  detail::fwht_columns(c);
  c *= Scalar(f.res_x().cell_measure() * f.res_y().cell_measure());
  return BasicSpectrum2<Scalar>(f.res_x(), f.res_y(), std::move(c));
}

template <typename Scalar>
BasicStepFn2<Scalar> inverse_transform(const BasicSpectrum2<Scalar>& s,
                                       const Limits& limits = {}) {
  typename BasicStepFn2<Scalar>::Matrix v = s.coeffs();
  detail::transform_rows(v, /*permute_before=*/false, /*permute_after=*/true);
  detail::fwht_columns(v);
  detail::permute_rows(v);
  return BasicStepFn2<Scalar>(s.res_x(), s.res_y(), std::move(v), limits);
}

// ---------------------------------------------------------------------------
// Named functions

// r_k(x) = (-1)^{x_k}.
inline StepFn1 rademacher(int k, Resolution res, const Limits& limits = {}) {
  if (k < 0 || k >= res.bits()) {
    throw std::out_of_range("rademacher index " + std::to_string(k) +
                            " needs resolution above it");
  }
  check_cap_1d(res, limits);
  StepFn1::Vector v(res.cells());
  const int shift = res.bits() - 1 - k;
  for (Index j = 0; j < v.size(); ++j) v[j] = ((j >> shift) & 1) ? -1.0 : 1.0;
  return StepFn1(res, std::move(v), limits);
}

// w_n = prod_k r_k^{n_k}.
inline StepFn1 walsh_paley(std::uint64_t n, Resolution res,
                           const Limits& limits = {}) {
  check_cap_1d(res, limits);
  if (n >= static_cast<std::uint64_t>(res.cells())) {
    throw std::out_of_range("walsh index " + std::to_string(n) +
                            " outside resolution");
  }
  StepFn1::Vector v(res.cells());
  for (Index j = 0; j < v.size(); ++j) {
    v[j] = walsh_sign(n, static_cast<std::uint64_t>(j), res.bits());
  }
  return StepFn1(res, std::move(v), limits);
}

// D_n = sum_{k<n} w_k, summed literally.
inline StepFn1 dirichlet_kernel(std::uint64_t n, Resolution res,
                                const Limits& limits = {}) {
  check_cap_1d(res, limits);
  if (n > static_cast<std::uint64_t>(res.cells())) {
    throw std::out_of_range("dirichlet index exceeds 2^bits");
  }
  std::vector<std::uint64_t> reversed(static_cast<std::size_t>(res.cells()));
  for (std::size_t j = 0; j < reversed.size(); ++j) reversed[j] = bit_reverse(j, res.bits());
  StepFn1::Vector v = StepFn1::Vector::Zero(res.cells());
  for (std::uint64_t k = 0; k < n; ++k) {
    for (Index j = 0; j < v.size(); ++j) {
      v[j] += (std::popcount(k & reversed[static_cast<std::size_t>(j)]) & 1) ? -1.0 : 1.0;
    }
  }
  return StepFn1(res, std::move(v), limits);
}

// D_{2^m} = 2^m on I_m and 0 on its complement.
inline StepFn1 dirichlet_dyadic(int m, Resolution res, const Limits& limits = {}) {
  if (m < 0 || m > res.bits()) {
    throw std::out_of_range("dyadic kernel order exceeds resolution");
  }
  check_cap_1d(res, limits);
  StepFn1::Vector v(res.cells());
  const int shift = res.bits() - m;
  const double height = std::ldexp(1.0, m);
  for (Index j = 0; j < v.size(); ++j) v[j] = (j >> shift) == 0 ? height : 0.0;
  return StepFn1(res, std::move(v), limits);
}

// D_n from the closed forms: the indicator form for powers of two and
// D_n = w_n * sum_j n_j w_{2^j} D_{2^j} otherwise.
inline StepFn1 dirichlet_closed(std::uint64_t n, Resolution res,
                                const Limits& limits = {}) {
  check_cap_1d(res, limits);
  if (n > static_cast<std::uint64_t>(res.cells())) {
    throw std::out_of_range("dirichlet index exceeds 2^bits");
  }
  if (n == 0) return StepFn1::zeros(res, limits);
  if (std::has_single_bit(n)) return dirichlet_dyadic(std::countr_zero(n), res, limits);

  StepFn1::Vector acc = StepFn1::Vector::Zero(res.cells());
  for (int j = 0; (n >> j) != 0; ++j) {
    if (((n >> j) & 1u) == 0) continue;
    const StepFn1 term =
        walsh_paley(std::uint64_t{1} << j, res, limits) * dirichlet_dyadic(j, res, limits);
    acc += term.values();
  }
  const StepFn1 wn = walsh_paley(n, res, limits);
  return StepFn1(res, wn.values().cwiseProduct(acc), limits);
}

// S_{M,N} f: keep coefficients with i < M and j < N, then synthesize.
inline StepFn2 rectangular_partial_sum(const Spectrum2& s, Index m, Index n,
                                       const Limits& limits = {}) {
  if (m < 0 || n < 0 || m > s.res_x().cells() || n > s.res_y().cells()) {
    throw std::out_of_range("partial sum index outside spectrum");
  }
  Spectrum2::Matrix c = Spectrum2::Matrix::Zero(s.coeffs().rows(), s.coeffs().cols());
  c.topLeftCorner(m, n) = s.coeffs().topLeftCorner(m, n);
  return inverse_transform(Spectrum2(s.res_x(), s.res_y(), std::move(c)), limits);
}

inline StepFn1 partial_sum(const Spectrum1& s, Index m, const Limits& limits = {}) {
  if (m < 0 || m > s.resolution().cells()) {
    throw std::out_of_range("partial sum index outside spectrum");
  }
  Spectrum1::Vector c = Spectrum1::Vector::Zero(s.coeffs().size());
  c.head(m) = s.coeffs().head(m);
  return inverse_transform(Spectrum1(s.resolution(), std::move(c)), limits);
}

// Direct O(cells) evaluation of the integral of f * w_i. Used as the oracle
// for the fast transform; does not share code with it.
inline double coefficient_oracle(const StepFn1& f, std::uint64_t i) {
  const int bits = f.resolution().bits();
  if (i >= static_cast<std::uint64_t>(f.resolution().cells())) {
    throw std::out_of_range("coefficient index outside resolution");
  }
  double s = 0.0;
  for (Index j = 0; j < f.values().size(); ++j) {
    s += f[j] * walsh_sign(i, static_cast<std::uint64_t>(j), bits);
  }
  return s * f.resolution().cell_measure();
}

inline double coefficient_oracle(const StepFn2& f, std::uint64_t i, std::uint64_t j) {
  const int bx = f.res_x().bits();
  const int by = f.res_y().bits();
  if (i >= static_cast<std::uint64_t>(f.res_x().cells()) ||
      j >= static_cast<std::uint64_t>(f.res_y().cells())) {
    throw std::out_of_range("coefficient index outside resolution");
  }
  double s = 0.0;
  for (Index r = 0; r < f.values().rows(); ++r) {
    const int sx = walsh_sign(i, static_cast<std::uint64_t>(r), bx);
    for (Index c = 0; c < f.values().cols(); ++c) {
      s += f(r, c) * sx * walsh_sign(j, static_cast<std::uint64_t>(c), by);
    }
  }
  return s * f.res_x().cell_measure() * f.res_y().cell_measure();
}

}  // namespace walshlab

#endif  // WALSHLAB_WALSH_H_
