#include "walshlab/hardy.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace walshlab {
namespace {

bool constant_on_blocks(const StepFn2::Matrix& v, int block_shift) {
  const Index side = Index{1} << block_shift;
  for (Index bi = 0; bi < v.rows(); bi += side) {
    for (Index bj = 0; bj < v.cols(); bj += side) {
      const double ref = v(bi, bj);
      for (Index i = bi; i < bi + side; ++i) {
        for (Index j = bj; j < bj + side; ++j) {
          if (v(i, j) != ref) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

Martingale2::Martingale2(StepFn2 finest) : finest_(std::move(finest)) {
  if (finest_.res_x() != finest_.res_y()) {
    throw std::invalid_argument("martingale grid must be square");
  }
  const int n = bits();
  stabilization_level_ = n;
  for (int level = 0; level < n; ++level) {
    if (constant_on_blocks(finest_.values(), n - level)) {
      stabilization_level_ = level;
      break;
    }
  }
}

std::vector<StepFn2> coarse_levels(const Martingale2& f) {
  const int n = f.bits();
  std::vector<StepFn2> levels(static_cast<std::size_t>(n) + 1);
  levels[static_cast<std::size_t>(n)] = f.finest();
  for (int k = n - 1; k >= 0; --k) {
    const StepFn2::Matrix& fine = levels[static_cast<std::size_t>(k) + 1].values();
    const Index side = Index{1} << k;
    StepFn2::Matrix coarse(side, side);
    for (Index i = 0; i < side; ++i) {
      for (Index j = 0; j < side; ++j) {
        const double top = fine(2 * i, 2 * j) + fine(2 * i, 2 * j + 1);
        const double bottom = fine(2 * i + 1, 2 * j) + fine(2 * i + 1, 2 * j + 1);
        coarse(i, j) = (top + bottom) * 0.25;
      }
    }
    levels[static_cast<std::size_t>(k)] =
        StepFn2(Resolution(k), Resolution(k), std::move(coarse));
  }
  return levels;
}

StepFn2 level(const Martingale2& f, int n) {
  if (n < 0) throw std::invalid_argument("martingale level must be nonnegative");
  if (n >= f.bits()) return f.finest();
  const Resolution r(f.bits());
  return coarse_levels(f)[static_cast<std::size_t>(n)].refined(r, r);
}

StepFn2 maximal_function(const Martingale2& f) {
  const int n = f.bits();
  const auto levels = coarse_levels(f);
  StepFn2::Matrix out = StepFn2::Matrix::Zero(f.finest().values().rows(),
                                              f.finest().values().cols());
  for (int k = 0; k <= f.stabilization_level(); ++k) {
    const StepFn2::Matrix& lv = levels[static_cast<std::size_t>(k)].values();
    const int shift = n - k;
    for (Index i = 0; i < out.rows(); ++i) {
      for (Index j = 0; j < out.cols(); ++j) {
        out(i, j) = std::max(out(i, j), std::abs(lv(i >> shift, j >> shift)));
      }
    }
  }
  return StepFn2(f.finest().res_x(), f.finest().res_y(), std::move(out));
}

double hardy_quasinorm(const Martingale2& f, double p) {
  return lp_quasinorm(maximal_function(f), p);
}

AtomReport validate_atom(const Atom& a) {
  if (a.cube_level < 0) throw std::invalid_argument("negative cube level");
  const Resolution cube(a.cube_level);
  const Resolution rx = std::max(a.fn.res_x(), cube);
  const Resolution ry = std::max(a.fn.res_y(), cube);
  const StepFn2 fn = a.fn.refined(rx, ry, Limits{62, 62});
  const std::uint64_t cx = a.corner_x.cell_at(cube);
  const std::uint64_t cy = a.corner_y.cell_at(cube);
  const int sx = rx.bits() - a.cube_level;
  const int sy = ry.bits() - a.cube_level;

  AtomReport report;
  report.support_ok = true;
  double inside = 0.0;
  for (Index i = 0; i < fn.values().rows(); ++i) {
    const bool row_in = static_cast<std::uint64_t>(i >> sx) == cx;
    for (Index j = 0; j < fn.values().cols(); ++j) {
      const double v = fn(i, j);
      report.sup_norm = std::max(report.sup_norm, std::abs(v));
      if (row_in && static_cast<std::uint64_t>(j >> sy) == cy) {
        inside += v;
      } else if (v != 0.0) {
        report.support_ok = false;
      }
    }
  }
  const double cube_measure = std::ldexp(1.0, -2 * a.cube_level);
  report.integral = inside * rx.cell_measure() * ry.cell_measure();
  report.zero_integral_ok =
      std::abs(report.integral) <= 1e-12 * report.sup_norm * cube_measure;
  report.sup_bound = std::pow(cube_measure, -1.0 / a.p);
  report.sup_bound_ok = report.sup_norm <= report.sup_bound + 1e-9;
  return report;
}

AssembledMartingale assemble(const AtomicDecomposition& d, const Limits& limits) {
  if (d.entries.empty()) {
    return {Martingale2(StepFn2::zeros(Resolution(0), Resolution(0))), 0.0};
  }
  const double p = d.entries.front().atom.p;
  int bits = 0;
  for (const auto& e : d.entries) {
    if (e.atom.p != p) throw std::invalid_argument("atoms with mixed p");
    bits = std::max({bits, e.atom.fn.res_x().bits(), e.atom.fn.res_y().bits()});
  }
  const Resolution r(bits);
  check_cap_2d(r, r, limits);

  StepFn2::Matrix acc = StepFn2::Matrix::Zero(r.cells(), r.cells());
  double weight_sum = 0.0;
  for (const auto& e : d.entries) {
    acc += e.weight * e.atom.fn.refined(r, r, limits).values();
    weight_sum += std::pow(std::abs(e.weight), p);
  }
  return {Martingale2(StepFn2(r, r, std::move(acc), limits)),
          std::pow(weight_sum, 1.0 / p)};
}

}  // namespace walshlab
