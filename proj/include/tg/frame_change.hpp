#pragma once

// Changes of frame for structure constants and covariant tensors.

#include <Eigen/Dense>
#include <vector>

#include "tg/frame_tensor.hpp"

namespace tg {

/// c'^r_{ij} = (A^{-1})^r_a c^a_{bc} A^b_i A^c_j: the same algebra in the frame e'_i = A^b_i e_b.
inline FrameTensor transform_structure(const FrameTensor& c, const Eigen::MatrixXd& A) {
  const int n = c.dim();
  const Eigen::MatrixXd Ai = A.inverse();
  FrameTensor out(n, 3);
  FrameTensor tmp(n, 3);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int b = 0; b < n; ++b)
          for (int d = 0; d < n; ++d) s += c(a, b, d) * A(b, i) * A(d, j);
        tmp(a, i, j) = s;
      }
  for (int r = 0; r < n; ++r)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += Ai(r, a) * tmp(a, i, j);
        out(r, i, j) = s;
      }
  return out;
}

/// T'(i1..ir) = T(b1..br) Q^{b1}_{i1} ... Q^{br}_{ir}.
inline FrameTensor rotate_covariant(const FrameTensor& T, const Eigen::MatrixXd& Q) {
  FrameTensor cur = T;
  const int n = T.dim(), r = T.rank();
  std::vector<int> idx(static_cast<std::size_t>(r)), src(idx.size());
  for (int s = 0; s < r; ++s) {
    FrameTensor next(n, r, T.antisymmetric());
    for (std::size_t off = 0; off < next.size(); ++off) {
      next.unflatten(off, idx);
      src = idx;
      double acc = 0.0;
      for (int b = 0; b < n; ++b) {
        src[static_cast<std::size_t>(s)] = b;
        acc += cur(src) * Q(b, idx[static_cast<std::size_t>(s)]);
      }
      next.data()[off] = acc;
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace tg
