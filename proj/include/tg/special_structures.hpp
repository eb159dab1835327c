#pragma once

// Complex, hypercomplex, G2 and Spin(7) structures on Lie-frame geometries.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "tg/algebras.hpp"
#include "tg/frame_tensor.hpp"
#include "tg/geometry.hpp"
#include "tg/report.hpp"
#include "tg/verifiers.hpp"

namespace tg {

/// J[a][b] is the a-th frame component of J e_b.
struct AlmostComplexStructure {
  Eigen::MatrixXd J;

  int dim() const { return static_cast<int>(J.rows()); }

  double square_defect() const { return (J * J + Eigen::MatrixXd::Identity(dim(), dim())).cwiseAbs().maxCoeff(); }
  double orthogonality_defect() const { return (J.transpose() * J - Eigen::MatrixXd::Identity(dim(), dim())).cwiseAbs().maxCoeff(); }

  static AlmostComplexStructure make(Eigen::MatrixXd J, double tol = 1e-10) {
    if (J.rows() != J.cols() || J.rows() % 2 != 0 || J.rows() == 0) throw InputError("complex structure: even square matrix required");
    AlmostComplexStructure s{std::move(J)};
    if (s.square_defect() > tol) throw InputError("complex structure: J^2 != -1");
    if (s.orthogonality_defect() > tol) throw InputError("complex structure: J is not orthogonal");
    return s;
  }

  /// omega(X, Y) = g(X, J Y).
  FrameTensor fundamental_form() const {
    const int n = dim();
    FrameTensor w = FrameTensor::form(n, 2);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) w(a, b) = J(a, b);
    return w;
  }

  FrameTensor as_tensor() const {
    const int n = dim();
    FrameTensor t(n, 2);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t(a, b) = J(a, b);
    return t;
  }
};

/// Standard block structure e_{2k} -> e_{2k+1}.
inline AlmostComplexStructure standard_complex_structure(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; k += 2) {
    J(k + 1, k) = 1.0;
    J(k, k + 1) = -1.0;
  }
  return AlmostComplexStructure::make(J);
}

struct HypercomplexTriple {
  AlmostComplexStructure I1, I2, I3;

  double anticommutator_defect() const { return (I1.J * I2.J + I2.J * I1.J).cwiseAbs().maxCoeff(); }
  double product_defect() const { return (I3.J - I1.J * I2.J).cwiseAbs().maxCoeff(); }

  const AlmostComplexStructure& operator[](int r) const { return r == 0 ? I1 : (r == 1 ? I2 : I3); }
};

inline HypercomplexTriple make_triple(const Eigen::MatrixXd& I1, const Eigen::MatrixXd& I2) {
  return {AlmostComplexStructure::make(I1), AlmostComplexStructure::make(I2), AlmostComplexStructure::make(I1 * I2)};
}

/// Flat quaternion triple on R^{4q}, block by block.
inline HypercomplexTriple standard_quaternion_triple(int n) {
  if (n % 4 != 0) throw InputError("standard_quaternion_triple: dim must be divisible by 4");
  Eigen::MatrixXd I = Eigen::MatrixXd::Zero(n, n), J = Eigen::MatrixXd::Zero(n, n);
  for (int o = 0; o < n; o += 4) {
    I(o + 1, o) = 1;
    I(o, o + 1) = -1;
    I(o + 3, o + 2) = 1;
    I(o + 2, o + 3) = -1;
    J(o + 2, o) = 1;
    J(o, o + 2) = -1;
    J(o + 1, o + 3) = 1;
    J(o + 3, o + 1) = -1;
  }
  return make_triple(I, J);
}

/// N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] on frame vectors; out(a, i, j) = N(e_i, e_j)^a.
inline FrameTensor nijenhuis(const AlmostComplexStructure& J, const LieFrameGeometry& geom) {
  const int n = geom.dim();
  if (J.dim() != n) throw InputError("nijenhuis: dimension mismatch");
  const FrameTensor& c = geom.c();
  // br(A, B)(a, i, j) = c^a_{bd} A^b_i B^d_j
  auto br = [&](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
    for (int a = 0; a < n; ++a) {
      Eigen::MatrixXd Ca(n, n);
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) Ca(b, d) = c(a, b, d);
      out[static_cast<std::size_t>(a)] = A.transpose() * Ca * B;
    }
    return out;
  };
  const Eigen::MatrixXd Id = Eigen::MatrixXd::Identity(n, n);
  const auto JJ = br(J.J, J.J), JI = br(J.J, Id), IJ = br(Id, J.J), II = br(Id, Id);
  FrameTensor N(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) {
        double v = JJ[std::size_t(a)](i, j) - II[std::size_t(a)](i, j);
        for (int k = 0; k < n; ++k) v -= J.J(a, k) * (JI[std::size_t(k)](i, j) + IJ[std::size_t(k)](i, j));
        N(a, i, j) = v;
      }
  return N;
}

/// (3,0)+(0,3) part of a 3-form: 1/4 (H - H(J.,J.,.) - H(J.,.,J.) - H(.,J.,J.)).
inline FrameTensor type_30_projection(const FrameTensor& H, const AlmostComplexStructure& J) {
  detail::require_form(H, "type_30_projection");
  const int n = H.dim();
  if (H.degree() != 3 || J.dim() != n) throw InputError("type_30_projection: 3-form of matching dimension required");
  // HJ_s = H with J applied in slot s: HJ_s(..x..) = H(..Jx..) = J^m_x H(..m..)
  auto apply = [&](const FrameTensor& T, int slot) {
    FrameTensor out(n, 3);
    std::array<int, 3> idx{}, src{};
    for (std::size_t off = 0; off < out.size(); ++off) {
      out.unflatten(off, idx);
      double v = 0.0;
      src = idx;
      for (int m = 0; m < n; ++m) {
        const double jm = J.J(m, idx[std::size_t(slot)]);
        if (jm == 0.0) continue;
        src[std::size_t(slot)] = m;
        v += jm * T(src);
      }
      out.data()[off] = v;
    }
    return out;
  };
  FrameTensor p = H;
  p -= apply(apply(H, 0), 1);
  p -= apply(apply(H, 0), 2);
  p -= apply(apply(H, 1), 2);
  p *= 0.25;
  p.set_antisymmetric(true);
  return p;
}

/// KT conditions for J on a Lie-frame geometry of even dimension.
inline StructureReport kt_report(const LieFrameGeometry& geom, const AlmostComplexStructure& J, const EpsilonOrientation& orient,
                                 double tol = 1e-10) {
  const int n = geom.dim();
  if (n % 2 != 0) throw InputError("kt_report: dimension must be even");
  if (J.dim() != n || orient.dim != n) throw InputError("kt_report: dimension mismatch");
  StructureReport rep;
  rep.title = "KT structure";
  rep.add("hermitian", "g(JX,JY) - g(X,Y)", J.orthogonality_defect(), tol);
  rep.add("complex", "J^2 + 1", J.square_defect(), tol);
  rep.add("parallel", "nabla^ J", nabla_invariant(J.as_tensor(), with_torsion(geom, 1)).sup_norm(), tol);
  rep.add("nijenhuis", "N_J", nijenhuis(J, geom).sup_norm(), tol);
  rep.add("closed_torsion", "dH", d_invariant(geom.H(), geom).sup_norm(), tol);
  rep.add("torsion_type", "(3,0)+(0,3) part of H", type_30_projection(geom.H(), J).sup_norm(), tol);
  return rep;
}

inline StructureReport hkt_report(const LieFrameGeometry& geom, const HypercomplexTriple& q, const EpsilonOrientation& orient,
                                  double tol = 1e-10, double c_norm = 1.0) {
  const int n = geom.dim();
  if (n % 4 != 0) throw InputError("hkt_report: dimension must be divisible by 4");
  StructureReport rep;
  rep.title = "HKT structure";
  rep.add("anticommute", "I1 I2 + I2 I1", q.anticommutator_defect(), tol);
  rep.add("quaternion_product", "I3 - I1 I2", q.product_defect(), tol);
  for (int r = 0; r < 3; ++r) rep.append(kt_report(geom, q[r], orient, tol), "I" + std::to_string(r + 1) + ".");
  std::array<FrameTensor, 3> theta{lee_form(geom, q.I1.fundamental_form(), c_norm, orient),
                                   lee_form(geom, q.I2.fundamental_form(), c_norm, orient),
                                   lee_form(geom, q.I3.fundamental_form(), c_norm, orient)};
  rep.add("lee_12", "theta1 - theta2", (theta[0] - theta[1]).sup_norm(), tol);
  rep.add("lee_13", "theta1 - theta3", (theta[0] - theta[2]).sup_norm(), tol);
  rep.add("lee_norm", "|theta1|", theta[0].sup_norm(), tol, false);
  return rep;
}

/// sup |nabla T| for the connection with torsion sign*H.
inline double parallel_residual(const FrameTensor& T, const LieFrameGeometry& geom, int sign = 1) {
  if (T.dim() != geom.dim()) throw InputError("parallel_residual: dimension mismatch");
  return nabla_invariant(T, with_torsion(geom, sign)).sup_norm();
}

// ---------------------------------------------------------------------------------------------------------------------
// SU(3)

struct Su3Data {
  LieFrameGeometry geom;
  HypercomplexTriple triple;
  std::vector<Eigen::Matrix3cd> basis;  // anti-Hermitian matrices, orthonormal for -Re tr
  double h_alpha_minus_beta_norm2 = 0.0;
};

namespace detail {

inline Eigen::Matrix3cd unit(int i, int j) {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(i, j) = 1.0;
  return m;
}

inline double killing_inner(const Eigen::Matrix3cd& X, const Eigen::Matrix3cd& Y) { return -(X * Y).trace().real(); }

inline Eigen::Matrix3cd h1() { return Eigen::Vector3cd(1.0, -1.0, 0.0).asDiagonal() * (1.0 / std::sqrt(2.0)); }
inline Eigen::Matrix3cd h2() { return Eigen::Vector3cd(1.0, 1.0, -2.0).asDiagonal() * (1.0 / std::sqrt(6.0)); }

/// [i h1, i h2, u_a, v_a, u_b, v_b, u_ab, v_ab] with roots a = (0,1), b = (1,2), a+b = (0,2).
inline std::vector<Eigen::Matrix3cd> su3_basis() {
  const std::complex<double> I(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::Matrix3cd> B{I * h1(), I * h2()};
  for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
    B.push_back(s * (unit(i, j) - unit(j, i)));
    B.push_back(s * I * (unit(i, j) + unit(j, i)));
  }
  return B;
}

inline Eigen::VectorXd su3_coords(const Eigen::Matrix3cd& X, const std::vector<Eigen::Matrix3cd>& B) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(B.size()));
  for (std::size_t a = 0; a < B.size(); ++a) v(Eigen::Index(a)) = killing_inner(X, B[a]);
  return v;
}

/// Second complex structure, defined complex-linearly on sl(3,C) and commuting with X -> -X^dagger.
inline Eigen::Matrix3cd su3_J(const Eigen::Matrix3cd& X) {
  const std::complex<double> I(0.0, 1.0);
  auto sig = [](const Eigen::Matrix3cd& M) -> Eigen::Matrix3cd { return -M.adjoint(); };
  const std::complex<double> r = std::polar(1.0, M_PI / 3.0);
  const Eigen::Matrix3cd hp = r * (h1() - I * h2()) / std::sqrt(2.0);
  const Eigen::Matrix3cd hm = sig(hp);
  Eigen::Matrix3cd img[3][3];
  img[0][1] = -unit(2, 1);
  img[1][2] = unit(1, 0);
  img[0][2] = hp;
  img[1][0] = -sig(img[0][1]);
  img[2][1] = -sig(img[1][2]);
  img[2][0] = -sig(img[0][2]);
  Eigen::Matrix3cd out = Eigen::Matrix3cd::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) out += X(i, j) * img[i][j];
  Eigen::Matrix2cd P;
  P << (hp * h1()).trace(), (hm * h1()).trace(), (hp * h2()).trace(), (hm * h2()).trace();
  const Eigen::Matrix2cd Pi = P.inverse();
  const Eigen::Matrix3cd Jhp = -unit(0, 2), Jhm = sig(Jhp);
  const Eigen::Matrix3cd D = X.diagonal().asDiagonal();
  const std::complex<double> a[2] = {(D * h1()).trace(), (D * h2()).trace()};
  for (int k = 0; k < 2; ++k) out += a[k] * (Pi(0, k) * Jhp + Pi(1, k) * Jhm);
  return out;
}

}  // namespace detail

/// su(3) with the Killing-type metric -Re tr, torsion H = -(structure 3-form), and the triple (I, J, IJ).
inline Su3Data build_su3() {
  const auto B = detail::su3_basis();
  const int n = 8;
  FrameTensor c(n, 3);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      const Eigen::Matrix3cd br = B[std::size_t(b)] * B[std::size_t(d)] - B[std::size_t(d)] * B[std::size_t(b)];
      for (int a = 0; a < n; ++a) c(a, b, d) = detail::killing_inner(br, B[std::size_t(a)]);
    }
  Eigen::MatrixXd I = Eigen::MatrixXd::Zero(n, n);
  I(1, 0) = -1;
  I(0, 1) = 1;
  for (int k : {2, 4, 6}) {
    I(k + 1, k) = 1;
    I(k, k + 1) = -1;
  }
  Eigen::MatrixXd J(n, n);
  for (int b = 0; b < n; ++b) J.col(b) = detail::su3_coords(detail::su3_J(B[std::size_t(b)]), B);
  const double roundoff = 1e-14;
  J = J.unaryExpr([&](double v) { return std::abs(v) < roundoff ? 0.0 : v; });
  const Eigen::Matrix3cd h_amb = std::complex<double>(0, 1) * Eigen::Vector3cd(1.0, -2.0, 1.0).asDiagonal().toDenseMatrix();
  Su3Data out{LieFrameGeometry::make(c, cartan_form(c, -1.0), "su3"), make_triple(I, J), B, detail::killing_inner(h_amb, h_amb)};
  return out;
}

// ---------------------------------------------------------------------------------------------------------------------
// G2 and Spin(7)

struct G2Data {
  FrameTensor phi;
  EpsilonOrientation orient{7, 1};
};

struct CayleyData {
  FrameTensor Phi;
  EpsilonOrientation orient{8, 1};
  StructureReport report;
};

namespace detail {

inline FrameTensor bryant_phi() {
  FrameTensor phi = FrameTensor::form(7, 3);
  const int plus[4][3] = {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}};
  const int minus[3][3] = {{1, 4, 6}, {2, 3, 6}, {2, 4, 5}};
  for (const auto& t : plus) phi.add_form_component(std::vector<int>{t[0], t[1], t[2]}, 1.0);
  for (const auto& t : minus) phi.add_form_component(std::vector<int>{t[0], t[1], t[2]}, -1.0);
  return phi;
}

/// Copy of a form with every index shifted by off, in dimension n.
inline FrameTensor shift_form(const FrameTensor& f, int off, int n) {
  FrameTensor out = FrameTensor::form(n, f.degree());
  for (const auto& s : increasing_subsets(f.dim(), f.degree())) {
    const double v = f(s);
    if (v == 0.0) continue;
    std::vector<int> t = s;
    for (int& i : t) i += off;
    out.add_form_component(t, v);
  }
  return out;
}

}  // namespace detail

inline G2Data build_g2_standard(const EpsilonOrientation& orient = {7, 1}) {
  if (orient.dim != 7) throw InputError("build_g2: orientation must be 7-dimensional");
  return {detail::bryant_phi(), orient};
}

/// phi = l1^l2^l3 + sum_r l_r ^ omega_r, with the dual vectors of the l_r in the kernel of every omega.
inline G2Data build_g2_product(const std::array<FrameTensor, 3>& lambda, const std::array<FrameTensor, 3>& omega,
                               const EpsilonOrientation& orient = {7, 1}, double tol = 1e-12) {
  for (const auto& l : lambda)
    if (l.dim() != 7 || l.rank() != 1) throw InputError("build_g2_product: lambda must be 1-forms in dimension 7");
  for (const auto& w : omega) {
    detail::require_form(w, "build_g2_product");
    if (w.dim() != 7 || w.degree() != 2) throw InputError("build_g2_product: omega must be 2-forms in dimension 7");
  }
  for (const auto& l : lambda)
    for (const auto& w : omega)
      if (interior_product(l, w).sup_norm() > tol) throw InputError("build_g2_product: omega is not orthogonal to the lambda frame");
  FrameTensor phi = wedge(wedge(lambda[0], lambda[1]), lambda[2]);
  for (int r = 0; r < 3; ++r) phi += wedge(lambda[std::size_t(r)], omega[std::size_t(r)]);
  return {phi, orient};
}

/// Flat quaternion 2-forms on e3..e6 read off the standard form; the anti-self-dual variant reflects e6.
inline std::array<FrameTensor, 3> flat_quaternion_forms(bool anti_self_dual) {
  const FrameTensor phi = detail::bryant_phi();
  std::array<FrameTensor, 3> out{FrameTensor::form(7, 2), FrameTensor::form(7, 2), FrameTensor::form(7, 2)};
  for (int r = 0; r < 3; ++r)
    for (int a = 3; a < 7; ++a)
      for (int b = 3; b < 7; ++b) {
        const double s = (anti_self_dual && (a == 6) != (b == 6)) ? -1.0 : 1.0;
        out[std::size_t(r)](a, b) = s * phi(r, a, b);
      }
  return out;
}

inline G2Data build_g2_flat_product(bool anti_self_dual, const EpsilonOrientation& orient = {7, 1}) {
  return build_g2_product({FrameTensor::basis(7, 0), FrameTensor::basis(7, 1), FrameTensor::basis(7, 2)},
                          flat_quaternion_forms(anti_self_dual), orient);
}

/// su(2) on e0..e2 plus R^4, torsion minus the su(2) structure 3-form.
inline LieFrameGeometry su2_times_flat4() {
  const FrameTensor c = direct_sum({su2_structure(), abelian_structure(4)});
  const FrameTensor H = direct_sum({cartan_form(su2_structure(), -1.0), FrameTensor::form(4, 3)});
  return LieFrameGeometry::make(c, H, "su2+R4");
}

/// B(X,Y) vol = 1/6 iota_X phi ^ iota_Y phi ^ phi.
inline Eigen::MatrixXd bryant_positivity(const G2Data& g2) {
  if (g2.phi.dim() != 7 || g2.phi.degree() != 3 || g2.orient.dim != 7) throw InputError("bryant_positivity: 3-form in dimension 7 required");
  std::vector<FrameTensor> iota;
  for (int i = 0; i < 7; ++i) iota.push_back(interior_product(FrameTensor::basis(7, i), g2.phi));
  Eigen::MatrixXd B(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = i; j < 7; ++j) {
      B(i, j) = wedge_volume_coefficient(wedge(iota[std::size_t(i)], iota[std::size_t(j)]), g2.phi, g2.orient) / 6.0;
      B(j, i) = B(i, j);
    }
  return B;
}

enum class Definiteness { positive, negative, indefinite };

inline Definiteness definiteness(const Eigen::MatrixXd& B, double tol = 1e-10) {
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(B).eigenvalues();
  if (ev.minCoeff() > tol) return Definiteness::positive;
  if (ev.maxCoeff() < -tol) return Definiteness::negative;
  return Definiteness::indefinite;
}

/// Phi = e0 ^ phi + *phi with phi moved to indices 1..7.
inline CayleyData build_spin7(const G2Data& g2, double tol = 1e-12) {
  if (g2.phi.dim() != 7 || g2.phi.degree() != 3) throw InputError("build_spin7: G2 3-form required");
  const EpsilonOrientation o8(8, g2.orient.sign);
  FrameTensor Phi = wedge(FrameTensor::basis(8, 0), detail::shift_form(g2.phi, 1, 8));
  Phi += detail::shift_form(hodge_star(g2.phi, g2.orient), 1, 8);
  CayleyData out{Phi, o8, {}};
  out.report.title = "Cayley form";
  out.report.add("self_dual", "*Phi - Phi", (hodge_star(Phi, o8) - Phi).sup_norm(), tol);
  const double ww = wedge_volume_coefficient(Phi, Phi, o8);
  out.report.add("phi_wedge_phi", "Phi^Phi / vol - 14", std::abs(ww - 14.0), tol);
  out.report.add("phi_wedge_phi_value", "Phi^Phi / vol", ww, 0.0, false);
  return out;
}

}  // namespace tg
