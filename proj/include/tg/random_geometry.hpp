#pragma once

// Random samples of valid left-invariant geometries for property testing.

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "tg/frame_tensor.hpp"
#include "tg/frame_change.hpp"
#include "tg/geometry.hpp"

namespace tg {

enum class Block3 { su2, sl2, heisenberg, e2 };

namespace detail {

inline void set_bracket(FrameTensor& c, int off, int b, int d, int a, double v) {
  c(off + a, off + b, off + d) = v;
  c(off + a, off + d, off + b) = -v;
}

inline void put_block(FrameTensor& c, int off, Block3 kind) {
  switch (kind) {
    case Block3::su2:
      set_bracket(c, off, 0, 1, 2, 1.0);
      set_bracket(c, off, 1, 2, 0, 1.0);
      set_bracket(c, off, 2, 0, 1, 1.0);
      break;
    case Block3::sl2:  // h, e, f
      set_bracket(c, off, 0, 1, 1, 2.0);
      set_bracket(c, off, 0, 2, 2, -2.0);
      set_bracket(c, off, 1, 2, 0, 1.0);
      break;
    case Block3::heisenberg:
      set_bracket(c, off, 0, 1, 2, 1.0);
      break;
    case Block3::e2:
      set_bracket(c, off, 0, 2, 1, 1.0);
      set_bracket(c, off, 0, 1, 2, -1.0);
      break;
  }
}

}  // namespace detail

class GeometrySampler {
 public:
  explicit GeometrySampler(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  double normal() { return normal_(rng_); }

  Eigen::MatrixXd random_orthogonal(int n) {
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
      if (R(j, j) < 0) Q.col(j) *= -1.0;
    return Q;
  }

  /// Random totally antisymmetric form of unit sup-norm.
  FrameTensor random_form(int n, int p) {
    FrameTensor f = FrameTensor::form(n, p);
    for (const auto& s : detail::increasing_subsets(n, p)) f.add_form_component(s, normal());
    const double m = f.sup_norm();
    if (m > 0) f *= 1.0 / m;
    return f;
  }

  /// Unimodular algebra: direct sum of 3-dimensional blocks and an abelian rest, in a random non-orthonormal
  /// adapted frame; normalized to unit sup-norm.
  FrameTensor random_unimodular_structure(int n) {
    FrameTensor c(n, 3);
    int off = 0;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 3);
    while (n - off >= 3 && u(rng_) < 0.85) {
      detail::put_block(c, off, static_cast<Block3>(pick(rng_)));
      off += 3;
    }
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = normal() + (i == j ? 2.0 : 0.0);
    FrameTensor t = transform_structure(c, A);
    const double m = t.sup_norm();
    if (m > 0) t *= 1.0 / m;
    return t;
  }

  /// Random geometry with generic (usually non-closed) torsion.
  LieFrameGeometry random_geometry(int n) {
    FrameTensor c = random_unimodular_structure(n);
    return LieFrameGeometry::make(c, random_form(n, 3), "random");
  }

  /// Random geometry with exact torsion H = d(beta); falls back to a random form when the algebra gives dbeta = 0.
  LieFrameGeometry random_closed_geometry(int n) {
    FrameTensor c = random_unimodular_structure(n);
    LieFrameGeometry g0 = LieFrameGeometry::make(c, "random-closed");
    FrameTensor H = d_invariant(random_form(n, 2), g0);
    const double m = H.sup_norm();
    if (m > 1e-8) {
      H *= 1.0 / m;
    } else if (n <= 4) {
      H = random_form(n, 3);  // every 3-form is closed in dimension <= 4 on a unimodular algebra
    }
    return LieFrameGeometry::make(c, H, "random-closed");
  }

  /// Compact algebra su(2)^k + abelian with bi-invariant torsion H = s_b c on each block, randomly rotated.
  LieFrameGeometry random_biinvariant_geometry(int n) {
    FrameTensor c(n, 3);
    FrameTensor H = FrameTensor::form(n, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int off = 0;
    while (n - off >= 3 && u(rng_) < 0.8) {
      detail::put_block(c, off, Block3::su2);
      const double s = std::uniform_real_distribution<double>(-2.0, 2.0)(rng_);
      H.add_form_component(std::vector<int>{off, off + 1, off + 2}, s);
      off += 3;
    }
    const Eigen::MatrixXd Q = random_orthogonal(n);
    return LieFrameGeometry::make(transform_structure(c, Q), rotate_covariant(H, Q), "random-biinvariant");
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace tg
