#pragma once

// Left-invariant geometry on a Lie group in an orthonormal frame.
//
// Structure constants: [e_b, e_c] = c^a_{bc} e_a, stored c(a, b, c).
// Connection: nabla_{e_b} e_c = Gamma^a_{bc} e_a, stored gamma(a, b, c).
// Curvature: R(e_a, e_b) e_d = R_{ab}^c_d e_c, stored riemann(a, b, c, d).

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tg/frame_tensor.hpp"
#include "tg/report.hpp"

namespace tg {

/// Sup-norm of T^p_{ij} T^m_{pk} + cyclic(i,j,k), stored [m,i,j,k].
inline double jacobi_residual(const FrameTensor& T) {
  if (T.rank() != 3) throw InputError("jacobi_residual: rank-3 input required");
  const int n = T.dim();
  double worst = 0.0;
  auto term = [&](int m, int i, int j, int k) {
    double s = 0.0;
    for (int p = 0; p < n; ++p) s += T(p, i, j) * T(m, p, k);
    return s;
  };
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          worst = std::max(worst, std::abs(term(m, i, j, k) + term(m, j, k, i) + term(m, k, i, j)));
  return worst;
}

class LieFrameGeometry {
 public:
  LieFrameGeometry() = default;

  /// Validated construction; throws InputError on malformed data.
  static LieFrameGeometry make(FrameTensor c, FrameTensor H, std::string name = {}, double tol = 1e-10) {
    if (c.rank() != 3) throw InputError("structure constants must have rank 3");
    if (H.rank() != 3 || H.dim() != c.dim()) throw InputError("torsion must be a 3-form of the same dimension");
    if (!c.finite() || !H.finite()) throw InputError("non-finite component in geometry");
    const int n = c.dim();
    const double scale = std::max(1.0, c.sup_norm());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
          if (std::abs(c(a, b, d) + c(a, d, b)) > tol * scale)
            throw InputError("structure constants not antisymmetric in the lower pair");
    // canonical representatives: exact antisymmetry taken from the b < d and increasing-index components
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        c(a, b, b) = 0.0;
        for (int d = b + 1; d < n; ++d) c(a, d, b) = -c(a, b, d);
      }
    const double jac = jacobi_residual(c);
    if (jac > tol * scale * scale)
      throw InputError("structure constants violate the Jacobi identity (residual " + std::to_string(jac) + ")");
    if (H.antisymmetry_defect() > tol * std::max(1.0, H.sup_norm())) throw InputError("torsion is not totally antisymmetric");
    FrameTensor Hc = FrameTensor::form(n, 3);
    for (const auto& s : detail::increasing_subsets(n, 3))
      if (const double v = H(s); v != 0.0) Hc.add_form_component(s, v);
    H = std::move(Hc);
    c.set_antisymmetric(false);
    LieFrameGeometry g;
    g.c_ = std::move(c);
    g.H_ = std::move(H);
    g.name_ = std::move(name);
    g.jacobi_ = jac;
    return g;
  }

  static LieFrameGeometry make(FrameTensor c, std::string name = {}) {
    const int n = c.dim();
    return make(std::move(c), FrameTensor::form(n, 3), std::move(name));
  }

  int dim() const { return c_.dim(); }
  const FrameTensor& c() const { return c_; }
  const FrameTensor& H() const { return H_; }
  const std::string& name() const { return name_; }
  double jacobi() const { return jacobi_; }

  LieFrameGeometry with_H(FrameTensor H) const { return make(c_, std::move(H), name_); }

  /// Trace of ad_{e_b} for each b.
  std::vector<double> ad_trace() const {
    std::vector<double> t(static_cast<std::size_t>(dim()), 0.0);
    for (int b = 0; b < dim(); ++b)
      for (int a = 0; a < dim(); ++a) t[static_cast<std::size_t>(b)] += c_(a, b, a);
    return t;
  }

  bool unimodular(double tol = 1e-10) const {
    for (double x : ad_trace())
      if (std::abs(x) > tol * std::max(1.0, c_.sup_norm())) return false;
    return true;
  }

  /// [X, Y]^a = c^a_{bc} X^b Y^c.
  std::vector<double> bracket(std::span<const double> X, std::span<const double> Y) const {
    const int n = dim();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (X[static_cast<std::size_t>(b)] == 0.0) continue;
        for (int d = 0; d < n; ++d) out[static_cast<std::size_t>(a)] += c_(a, b, d) * X[static_cast<std::size_t>(b)] * Y[static_cast<std::size_t>(d)];
      }
    return out;
  }

 private:
  FrameTensor c_{1, 3};
  FrameTensor H_ = FrameTensor::form(1, 3);
  std::string name_;
  double jacobi_ = 0.0;
};

struct ConnectionCoeffs {
  FrameTensor gamma;
  int torsion_sign = 0;

  /// Sup-norm of Gamma^a_{bc} + Gamma^c_{ba}: zero for a metric connection.
  double metric_defect() const {
    const int n = gamma.dim();
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) worst = std::max(worst, std::abs(gamma(a, b, c) + gamma(c, b, a)));
    return worst;
  }
};

struct CurvatureData {
  FrameTensor riemann;
  FrameTensor ricci;
  double scalar = 0.0;
};

inline ConnectionCoeffs levi_civita(const LieFrameGeometry& geom) {
  const int n = geom.dim();
  const FrameTensor& c = geom.c();
  ConnectionCoeffs conn{FrameTensor(n, 3), 0};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) conn.gamma(a, b, d) = 0.5 * (c(a, b, d) - c(b, d, a) + c(d, a, b));
  double torsion = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) torsion = std::max(torsion, std::abs(conn.gamma(a, b, d) - conn.gamma(a, d, b) - c(a, b, d)));
  if (torsion > 1e-12 * std::max(1.0, c.sup_norm())) throw std::logic_error("levi_civita: torsion-free check failed");
  return conn;
}

/// Gamma + (sign/2) H: torsion +H for sign = +1, -H for sign = -1.
inline ConnectionCoeffs with_torsion(const LieFrameGeometry& geom, int sign) {
  if (sign != 0 && sign != 1 && sign != -1) throw InputError("with_torsion: sign must be -1, 0 or +1");
  ConnectionCoeffs conn = levi_civita(geom);
  conn.torsion_sign = sign;
  if (sign != 0) conn.gamma += (0.5 * sign) * geom.H();
  conn.gamma.set_antisymmetric(false);
  return conn;
}

inline CurvatureData curvature(const LieFrameGeometry& geom, const ConnectionCoeffs& conn) {
  const int n = geom.dim();
  const FrameTensor& c = geom.c();
  const FrameTensor& G = conn.gamma;
  CurvatureData out{FrameTensor(n, 4), FrameTensor(n, 2), 0.0};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) s += G(k, a, e) * G(e, b, d) - G(k, b, e) * G(e, a, d) - c(e, a, b) * G(k, e, d);
          out.riemann(a, b, k, d) = s;
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += out.riemann(k, i, k, j);
      out.ricci(i, j) = s;
    }
  for (int i = 0; i < n; ++i) out.scalar += out.ricci(i, i);
  return out;
}

/// Exterior derivative of a left-invariant form: (d alpha)_K = sum_{j<k} (-1)^{j+k} c^m_{i_j i_k} alpha_{m, K minus {i_j,i_k}}.
inline FrameTensor d_invariant(const FrameTensor& chi, const LieFrameGeometry& geom) {
  detail::require_form(chi, "d_invariant");
  if (chi.dim() != geom.dim()) throw InputError("d_invariant: dimension mismatch");
  const int n = chi.dim(), p = chi.degree();
  FrameTensor out = FrameTensor::form(n, p + 1);
  if (p == 0 || p + 1 > n) return out;
  const FrameTensor& c = geom.c();
  std::vector<int> rest(static_cast<std::size_t>(p));
  for (const auto& K : detail::increasing_subsets(n, p + 1)) {
    double acc = 0.0;
    for (int j = 0; j <= p; ++j)
      for (int k = j + 1; k <= p; ++k) {
        for (int q = 0, r = 1; q <= p; ++q)
          if (q != j && q != k) rest[static_cast<std::size_t>(r++)] = K[static_cast<std::size_t>(q)];
        const double sgn = ((j + k) % 2 == 0) ? 1.0 : -1.0;
        for (int m = 0; m < n; ++m) {
          const double cm = c(m, K[static_cast<std::size_t>(j)], K[static_cast<std::size_t>(k)]);
          if (cm == 0.0) continue;
          rest[0] = m;
          acc += sgn * cm * chi(rest);
        }
      }
    if (acc != 0.0) out.add_form_component(K, acc);
  }
  return out;
}

/// delta = (-1)^{n(p+1)+1} * d *; the formal adjoint of d on unimodular algebras.
/// `non_unimodular`, when given, is set if adjointness fails for this algebra.
inline FrameTensor codifferential(const FrameTensor& chi, const LieFrameGeometry& geom, const EpsilonOrientation& orient,
                                  bool* non_unimodular = nullptr) {
  detail::require_form(chi, "codifferential");
  if (chi.degree() < 1) throw InputError("codifferential: degree must be at least 1");
  if (non_unimodular) *non_unimodular = !geom.unimodular();
  const int n = chi.dim(), p = chi.degree();
  const double sgn = ((n * (p + 1) + 1) % 2 == 0) ? 1.0 : -1.0;
  return sgn * hodge_star(d_invariant(hodge_star(chi, orient), geom), orient);
}

/// (nabla_a T)_{b1..br} = -sum_s Gamma^m_{a b_s} T_{b1..m..br}; the derivative index comes first.
inline FrameTensor nabla_invariant(const FrameTensor& T, const ConnectionCoeffs& conn) {
  const int n = T.dim(), r = T.rank();
  if (conn.gamma.dim() != n) throw InputError("nabla_invariant: dimension mismatch");
  FrameTensor out(n, r + 1);
  std::vector<int> idx(static_cast<std::size_t>(r + 1)), src(static_cast<std::size_t>(r));
  for (std::size_t off = 0; off < out.size(); ++off) {
    out.unflatten(off, idx);
    const int a = idx[0];
    double acc = 0.0;
    for (int s = 0; s < r; ++s) {
      for (int q = 0; q < r; ++q) src[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q + 1)];
      const int bs = idx[static_cast<std::size_t>(s + 1)];
      for (int m = 0; m < n; ++m) {
        const double g = conn.gamma(m, a, bs);
        if (g == 0.0) continue;
        src[static_cast<std::size_t>(s)] = m;
        acc -= g * T(src);
      }
    }
    out.data()[off] = acc;
  }
  return out;
}

}  // namespace tg
