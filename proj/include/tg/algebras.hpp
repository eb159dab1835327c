#pragma once

// Small Lie algebras in orthonormal frames and direct sums of them.

#include <initializer_list>
#include <vector>

#include "tg/frame_tensor.hpp"
#include "tg/geometry.hpp"

namespace tg {

/// su(2) with [e_1, e_2] = e_3 and cyclic: c^a_{bc} = eps_{abc}.
inline FrameTensor su2_structure() {
  FrameTensor c(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int d = 0; d < 3; ++d) c(a, b, d) = EpsilonOrientation(3, 1).epsilon(std::vector<int>{a, b, d});
  return c;
}

inline FrameTensor abelian_structure(int n) { return FrameTensor(n, 3); }

/// Block-diagonal direct sum of structure constants (or of 3-forms when all inputs are forms).
inline FrameTensor direct_sum(std::initializer_list<FrameTensor> blocks) {
  int n = 0;
  bool forms = true;
  for (const auto& b : blocks) {
    if (b.rank() != 3) throw InputError("direct_sum: rank-3 blocks required");
    n += b.dim();
    forms = forms && b.antisymmetric();
  }
  FrameTensor out(n, 3, forms);
  int off = 0;
  for (const auto& b : blocks) {
    const int k = b.dim();
    for (int a = 0; a < k; ++a)
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const double v = b(a, i, j);
          if (v != 0.0) out(off + a, off + i, off + j) = v;
        }
    off += k;
  }
  return out;
}

/// The 3-form H_{abc} = c^a_{bc}; requires c totally antisymmetric (compact algebra in an orthonormal frame).
inline FrameTensor cartan_form(const FrameTensor& c, double scale = 1.0) {
  FrameTensor H = FrameTensor::form(c.dim(), 3);
  for (std::size_t i = 0; i < c.size(); ++i) H.data()[i] = scale * c.data()[i];
  const double defect = H.antisymmetry_defect();
  if (defect > 1e-12 * std::max(1.0, c.sup_norm()))
    throw InputError("cartan_form: structure constants are not totally antisymmetric in this frame");
  return H;
}

}  // namespace tg
