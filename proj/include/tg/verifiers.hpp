#pragma once

#include <cmath>
#include <string>

#include "tg/frame_tensor.hpp"
#include "tg/geometry.hpp"
#include "tg/report.hpp"

namespace tg {

enum class BianchiCheck { first, second, pair_symmetry, lccc };

inline const char* to_string(BianchiCheck w) {
  switch (w) {
    case BianchiCheck::first: return "first";
    case BianchiCheck::second: return "second";
    case BianchiCheck::pair_symmetry: return "pair_symmetry";
    case BianchiCheck::lccc: return "lccc";
  }
  return "?";
}

/// Curvature, torsion derivatives and dH shared by the Bianchi checks.
struct TorsionCurvatureData {
  ConnectionCoeffs hat, check, lc;
  CurvatureData R_hat, R_check;
  FrameTensor nabla_hat_H;  // (nabla^_i H)_{jkm} stored (i,j,k,m)
  FrameTensor dH;

  explicit TorsionCurvatureData(const LieFrameGeometry& g)
      : hat(with_torsion(g, 1)),
        check(with_torsion(g, -1)),
        lc(levi_civita(g)),
        R_hat(curvature(g, hat)),
        R_check(curvature(g, check)),
        nabla_hat_H(nabla_invariant(g.H(), hat)),
        dH(d_invariant(g.H(), g)) {}
};

namespace detail {

inline FrameTensor first_bianchi_lhs(const TorsionCurvatureData& t, double dH_coeff) {
  FrameTensor r = 3.0 * antisymmetrize(t.R_hat.riemann, {1, 2, 3}) + t.nabla_hat_H;
  if (dH_coeff != 0.0 && !t.dH.is_trivially_zero()) r += dH_coeff * t.dH;
  return r;
}

inline FrameTensor second_bianchi_lhs(const TorsionCurvatureData& t) {
  FrameTensor r = 3.0 * antisymmetrize(t.R_hat.riemann, {0, 1, 2});
  r += 1.5 * antisymmetrize(t.nabla_hat_H, {0, 1, 2});
  // (nabla^_m H_{ijk}) placed at (i,j,k,m)
  r += 0.5 * permute_slots(t.nabla_hat_H, {1, 2, 3, 0});
  if (!t.dH.is_trivially_zero()) r += 0.5 * t.dH;
  return r;
}

inline FrameTensor pair_symmetry_defect(const TorsionCurvatureData& t) {
  return t.R_hat.riemann - permute_slots(t.R_check.riemann, {2, 3, 0, 1});
}

}  // namespace detail

inline void bianchi_rows(StructureReport& rep, const LieFrameGeometry& geom, const TorsionCurvatureData& t, BianchiCheck which,
                         double tol) {
  const double dH = t.dH.sup_norm();
  switch (which) {
    case BianchiCheck::first:
      rep.add("bianchi_first", "3 R^_{i[jkm]} + (nabla^_i H)_{jkm} + 1/2 (dH)_{ijkm} = 0",
              detail::first_bianchi_lhs(t, 0.5).sup_norm(), tol);
      rep.add("bianchi_first_opposite_dH_sign", "3 R^_{i[jkm]} + (nabla^_i H)_{jkm} - 1/2 (dH)_{ijkm} (diagnostic)",
              detail::first_bianchi_lhs(t, -0.5).sup_norm(), tol, false);
      break;
    case BianchiCheck::second:
      rep.add("bianchi_second",
              "3 R^_{[ijk]m} + 3/2 (nabla^_{[i} H)_{jk]m} + 1/2 (nabla^_m H)_{ijk} + 1/2 (dH)_{ijkm} = 0",
              detail::second_bianchi_lhs(t).sup_norm(), tol);
      break;
    case BianchiCheck::pair_symmetry: {
      const bool closed = dH <= tol;
      rep.add("pair_symmetry", "R^_{ijkm} - Rv_{kmij} = 0 when dH = 0", detail::pair_symmetry_defect(t).sup_norm(), tol, closed);
      if (!closed) rep.note("pair symmetry not asserted: |dH| = " + std::to_string(dH));
      break;
    }
    case BianchiCheck::lccc: {
      const double nh = t.nabla_hat_H.sup_norm();
      const bool hyp = dH <= tol && nh <= tol;
      rep.add("lccc_hypothesis_dH", "dH = 0", dH, tol, false);
      rep.add("lccc_hypothesis_nabla_hat_H", "nabla^ H = 0", nh, tol, false);
      rep.add("lccc_nabla_H", "nabla H = 0 (Levi-Civita)", nabla_invariant(geom.H(), t.lc).sup_norm(), tol, hyp);
      rep.add("lccc_jacobi_H", "H^p_{ij} H_{pkm} + cyclic(ijk) = 0", jacobi_residual(geom.H()), tol, hyp);
      if (!hyp) {
        rep.hypotheses_met = false;
        rep.note("hypotheses not met: dH = 0 and nabla^ H = 0 are required");
      }
      break;
    }
  }
}

inline StructureReport bianchi_report(const LieFrameGeometry& geom, BianchiCheck which, double tol = 1e-10) {
  StructureReport rep;
  rep.title = std::string("bianchi ") + to_string(which);
  bianchi_rows(rep, geom, TorsionCurvatureData(geom), which, tol);
  return rep;
}

/// All four checks from one curvature evaluation.
inline StructureReport bianchi_report(const LieFrameGeometry& geom, double tol = 1e-10) {
  StructureReport rep;
  rep.title = "bianchi";
  const TorsionCurvatureData t(geom);
  for (auto w : {BianchiCheck::first, BianchiCheck::second, BianchiCheck::pair_symmetry})
    bianchi_rows(rep, geom, t, w, tol);
  StructureReport l;
  bianchi_rows(l, geom, t, BianchiCheck::lccc, tol);
  // lccc is conditional: a geometry outside its hypotheses is not a failure of the other identities
  for (auto& r : l.rows) {
    if (!l.hypotheses_met) r.asserted = false;
    rep.rows.push_back(r);
  }
  for (const auto& n : l.notes) rep.note(n);
  return rep;
}

/// theta = c_norm * *( *phi ^ delta phi ).
inline FrameTensor lee_form(const LieFrameGeometry& geom, const FrameTensor& phi, double c_norm, const EpsilonOrientation& orient) {
  detail::require_form(phi, "lee_form");
  const int n = geom.dim();
  if (phi.dim() != n || orient.dim != n) throw InputError("lee_form: dimension mismatch");
  if (phi.degree() < 1 || phi.degree() > n) return FrameTensor::form(n, 1);
  const FrameTensor dphi = codifferential(phi, geom, orient);
  const FrameTensor top = wedge(hodge_star(phi, orient), dphi);
  if (top.degree() > n) return FrameTensor::form(n, 1);
  return c_norm * hodge_star(top, orient);
}

inline StructureReport soliton_report(const LieFrameGeometry& geom, const FrameTensor& V, double tol = 1e-10) {
  if (V.rank() != 1 || V.dim() != geom.dim()) throw InputError("soliton_report: V must be a vector of the frame dimension");
  StructureReport rep;
  rep.title = "generalized steady soliton";
  const double dH = d_invariant(geom.H(), geom).sup_norm();
  rep.add("closed_torsion", "dH = 0", dH, tol);
  if (dH > tol) {
    rep.hypotheses_met = false;
    rep.note("refused: torsion is not closed (|dH| = " + std::to_string(dH) + ")");
    return rep;
  }
  const ConnectionCoeffs hat = with_torsion(geom, 1);
  const CurvatureData R = curvature(geom, hat);
  const FrameTensor nV = nabla_invariant(V, hat);
  const int n = geom.dim();
  double sol = 0.0, ric2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      sol = std::max(sol, std::abs(R.ricci(i, j) - nV(i, j)));
      ric2 += R.ricci(i, j) * R.ricci(i, j);
    }
  rep.add("soliton", "Ric^_{ij} - (nabla^_i V)_j = 0", sol, tol);
  // Invariant data: R^ and |H|^2 are constant, so nabla_V of them vanishes and the left side is 0.
  const double lhs = 0.0, rhs = ric2;
  rep.add("steady_lhs", "left side of the steady identity (constant scalars)", lhs, tol, false);
  rep.add("steady_rhs", "nabla_V(R^/2 + |H|^2/12) + |Ric^|^2", rhs, tol, false);
  rep.add("steady_identity", "nabla_V(R^/2 + |H|^2/12) + |Ric^|^2 = 0", std::abs(rhs - lhs), std::max(tol, tol * ric2), sol <= tol);
  return rep;
}

/// R(H)_{i1i2i3} = Ric_{i1}^k H_{i2i3k} - 2 R_{i1}^k_{i2}^m H_{i3km} + cyclic(i1,i2,i3), Levi-Civita curvature.
inline FrameTensor bochner_term(const LieFrameGeometry& geom, const FrameTensor& H, const CurvatureData& R) {
  const int n = geom.dim();
  FrameTensor t(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
          s += R.ricci(i, k) * H(j, l, k);
          for (int m = 0; m < n; ++m) s -= 2.0 * R.riemann(i, k, j, m) * H(l, k, m);
        }
        t(i, j, l) = s;
      }
  FrameTensor out = FrameTensor::form(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) out(i, j, l) = t(i, j, l) + t(j, l, i) + t(l, i, j);
  return out;
}

inline FrameTensor bochner_term(const LieFrameGeometry& geom) {
  return bochner_term(geom, geom.H(), curvature(geom, levi_civita(geom)));
}

/// Sup-norm of (d delta + delta d) H - ( -tr nabla^2 H + R(H) ).
inline double bochner_residual(const LieFrameGeometry& geom, const EpsilonOrientation& orient) {
  const FrameTensor& H = geom.H();
  const int n = geom.dim();
  if (n < 3) return 0.0;
  const ConnectionCoeffs lc = levi_civita(geom);
  const CurvatureData R = curvature(geom, lc);
  FrameTensor lap = d_invariant(codifferential(H, geom, orient), geom);
  if (n > 3) lap += codifferential(d_invariant(H, geom), geom, orient);
  const FrameTensor ddH = nabla_invariant(nabla_invariant(H, lc), lc);
  FrameTensor rough = FrameTensor::form(n, 3);
  const std::size_t stride = rough.size();
  for (int a = 0; a < n; ++a)
    for (std::size_t off = 0; off < stride; ++off)
      rough.data()[off] += ddH.data()[(static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)) * stride + off];
  return (lap + rough - bochner_term(geom, H, R)).sup_norm();
}

inline StructureReport bochner_report(const LieFrameGeometry& geom, const EpsilonOrientation& orient, double tol = 1e-10) {
  StructureReport rep;
  rep.title = "bochner";
  const bool uni = geom.unimodular();
  rep.add("bochner", "(d delta + delta d) H = -tr nabla^2 H + R(H)", bochner_residual(geom, orient), tol, uni);
  if (!uni) rep.note("algebra is not unimodular: codifferential is not the adjoint of d, residual not asserted");
  return rep;
}

}  // namespace tg
