#pragma once

// Curvature of principal fibrations over a 4-dimensional base, and characteristic-class arithmetic for the base.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tg/frame_tensor.hpp"
#include "tg/geometry.hpp"
#include "tg/special_structures.hpp"

namespace tg {

/// Fiber-algebra valued 2-form F^alpha_{ab} in an orthonormal frame of a 4-dimensional base.
struct PrincipalCurvature {
  int base_dim = 4;
  int fiber_dim = 0;
  std::vector<FrameTensor> F;   // one 2-form per fiber direction
  Eigen::MatrixXd fiber_metric;  // h_{alpha beta}
  FrameTensor fiber_structure;   // c^gamma_{alpha beta}

  void validate() const {
    if (base_dim != 4) throw InputError("principal curvature: base dimension must be 4");
    if (fiber_dim < 1 || static_cast<int>(F.size()) != fiber_dim) throw InputError("principal curvature: one 2-form per fiber direction required");
    for (const auto& f : F) {
      if (f.dim() != 4 || f.rank() != 2) throw InputError("principal curvature: F must be 2-forms on the base");
      if (f.antisymmetry_defect() > 1e-12) throw InputError("principal curvature: F is not antisymmetric");
    }
    if (fiber_metric.rows() != fiber_dim || fiber_metric.cols() != fiber_dim) throw InputError("principal curvature: fiber metric shape");
    if ((fiber_metric - fiber_metric.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw InputError("principal curvature: fiber metric not symmetric");
    if (Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(fiber_metric).eigenvalues().minCoeff() <= 0.0)
      throw InputError("principal curvature: fiber metric not positive definite");
    if (fiber_structure.dim() != fiber_dim || fiber_structure.rank() != 3) throw InputError("principal curvature: fiber structure shape");
  }
};

/// F+- = (F +- *F) / 2.
inline std::pair<FrameTensor, FrameTensor> sd_asd_split(const FrameTensor& F2, const EpsilonOrientation& orient) {
  detail::require_form(F2, "sd_asd_split");
  if (F2.dim() != 4 || F2.degree() != 2 || orient.dim != 4) throw InputError("sd_asd_split: 2-form on a 4-dimensional base required");
  const FrameTensor s = hodge_star(F2, orient);
  return {0.5 * (F2 + s), 0.5 * (F2 - s)};
}

/// sup over alpha, r, a, b of | -F_{alpha ca} I_r^c_b + F_{alpha cb} I_r^c_a - (B_alpha)^s_r (I_s)_{ab} |, with B[alpha](s, r).
inline double frestrict_residual(const PrincipalCurvature& pc, const std::vector<Eigen::Matrix3d>& B, const HypercomplexTriple& base) {
  pc.validate();
  if (static_cast<int>(B.size()) != pc.fiber_dim) throw InputError("frestrict_residual: one 3x3 block per fiber direction required");
  for (int r = 0; r < 3; ++r)
    if (base[r].dim() != 4) throw InputError("frestrict_residual: base complex structures must be 4x4");
  double worst = 0.0;
  for (int al = 0; al < pc.fiber_dim; ++al)
    for (int r = 0; r < 3; ++r) {
      const Eigen::MatrixXd& I = base[r].J;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          double lhs = 0.0;
          for (int c = 0; c < 4; ++c) lhs += -pc.F[std::size_t(al)](c, a) * I(c, b) + pc.F[std::size_t(al)](c, b) * I(c, a);
          double rhs = 0.0;
          for (int s = 0; s < 3; ++s) rhs += B[std::size_t(al)](s, r) * base[s].J(a, b);
          worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
  return worst;
}

/// B_0 = 0 and (B_r)^s_t = h eps_{r s t} on the su(2) directions 1..3.
inline std::vector<Eigen::Matrix3d> epsilon_representation(double h) {
  std::vector<Eigen::Matrix3d> B(4, Eigen::Matrix3d::Zero());
  const EpsilonOrientation e3(3, 1);
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s)
      for (int t = 0; t < 3; ++t) B[std::size_t(r + 1)](s, t) = h * e3.epsilon(std::vector<int>{r, s, t});
  return B;
}

/// sum_{alpha beta} h_{alpha beta} F^alpha ^ F^beta.
inline FrameTensor wedge_trace(const PrincipalCurvature& pc) {
  pc.validate();
  FrameTensor out = FrameTensor::form(4, 4);
  for (int a = 0; a < pc.fiber_dim; ++a)
    for (int b = 0; b < pc.fiber_dim; ++b) {
      const double h = pc.fiber_metric(a, b);
      if (h != 0.0) out += h * wedge(pc.F[std::size_t(a)], pc.F[std::size_t(b)]);
    }
  return out;
}

struct Su3Fibration {
  PrincipalCurvature curvature;
  HypercomplexTriple base;  // I, J, IJ restricted to the horizontal frame
  EpsilonOrientation orient{4, 1};
};

/// SU(3) over the horizontal frame {u_a, v_a, u_b, v_b}; fiber u(1) + su(2) spanned by
/// i diag(1,-2,1), i diag(1,0,-1), sqrt2 u_{a+b}, sqrt2 v_{a+b}; F^alpha_{ij} = <[X_i, X_j], Y_alpha> / |Y_alpha|^2.
inline Su3Fibration build_su3_fibration() {
  const Su3Data su3 = build_su3();
  const std::complex<double> i(0.0, 1.0);
  const double r2 = std::sqrt(2.0);
  const std::vector<Eigen::Matrix3cd> Y{i * Eigen::Vector3cd(1, -2, 1).asDiagonal().toDenseMatrix(),
                                        i * Eigen::Vector3cd(1, 0, -1).asDiagonal().toDenseMatrix(), r2 * su3.basis[6],
                                        r2 * su3.basis[7]};
  const std::array<int, 4> m{2, 3, 4, 5};
  Su3Fibration out;
  PrincipalCurvature& pc = out.curvature;
  pc.fiber_dim = 4;
  pc.fiber_metric = Eigen::MatrixXd::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) pc.fiber_metric(a, b) = detail::killing_inner(Y[std::size_t(a)], Y[std::size_t(b)]);
  for (int al = 0; al < 4; ++al) {
    FrameTensor f = FrameTensor::form(4, 2);
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) {
        const Eigen::Matrix3cd& X = su3.basis[std::size_t(m[std::size_t(p)])];
        const Eigen::Matrix3cd& Z = su3.basis[std::size_t(m[std::size_t(q)])];
        f(p, q) = detail::killing_inner(X * Z - Z * X, Y[std::size_t(al)]) / pc.fiber_metric(al, al);
      }
    pc.F.push_back(f);
  }
  pc.fiber_structure = FrameTensor(4, 3);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Eigen::Matrix3cd br = Y[std::size_t(a)] * Y[std::size_t(b)] - Y[std::size_t(b)] * Y[std::size_t(a)];
      for (int g = 0; g < 4; ++g) pc.fiber_structure(g, a, b) = detail::killing_inner(br, Y[std::size_t(g)]) / pc.fiber_metric(g, g);
    }
  auto restrict = [&](const AlmostComplexStructure& J) {
    Eigen::MatrixXd M(4, 4);
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) M(p, q) = J.J(m[std::size_t(p)], m[std::size_t(q)]);
    return AlmostComplexStructure::make(M);
  };
  out.base = {restrict(su3.triple.I1), restrict(su3.triple.I2), restrict(su3.triple.I3)};
  pc.validate();
  return out;
}

/// sup_r | F^r_+ + (h/2) omega_r | over the su(2) directions 1..3.
inline double sd_curvature_defect(const PrincipalCurvature& pc, const HypercomplexTriple& base, double h, const EpsilonOrientation& orient) {
  if (pc.fiber_dim != 4) throw InputError("sd_curvature_defect: u(1) + su(2) fiber required");
  double worst = 0.0;
  for (int r = 0; r < 3; ++r) {
    const FrameTensor fp = sd_asd_split(pc.F[std::size_t(r + 1)], orient).first;
    worst = std::max(worst, (fp + (0.5 * h) * base[r].fundamental_form()).sup_norm());
  }
  return worst;
}

// ---------------------------------------------------------------------------------------------------------------------
// Characteristic classes of the base

/// Base #k CP2-bar (k = 0 is S^4); n are the components of c1(L) in the standard basis.
struct TopologyData {
  int k = 0;
  std::vector<long long> n;
  long long chi = 2;
  long long tau = 0;

  static TopologyData blowups(std::vector<long long> n) {
    const int k = static_cast<int>(n.size());
    return {k, std::move(n), 2 + k, -k};
  }
  static TopologyData s4() { return {0, {}, 2, 0}; }

  void validate() const {
    if (k < 0) throw InputError("topology: k must be non-negative");
    if (static_cast<int>(n.size()) != k) throw InputError("topology: n must have k entries");
    if (chi != 2 + k || tau != -k) throw InputError("topology: chi = 2 + k and tau = -k required for #k CP2-bar");
  }
};

enum class TopologyMode { principal, u2 };

struct TopologyResult {
  long long c1_sq = 0;
  long long p1_adj = 0;
  long long obstruction = 0;
  long long c2E_numerator = 0;  // 4 c2(E)
  bool obstruction_vanishes = false;
  bool c1_sq_nonpositive = false;
  bool p1_divisible_by_3 = false;
  bool c2E_integral = false;
  std::string verdict;

  double c2E() const { return static_cast<double>(c2E_numerator) / 4.0; }
  bool admissible() const { return obstruction_vanishes && c1_sq_nonpositive && c2E_integral; }
};

/// c1^2 = -sum n^2, p1 = 2 chi + 3 tau, obstruction 3 c1^2 + p1, c2(E) = (c1^2 - p1) / 4 from c1(E) = -c1(L).
inline TopologyResult chern_topology(const TopologyData& top, TopologyMode mode = TopologyMode::principal) {
  top.validate();
  TopologyResult r;
  for (long long v : top.n) r.c1_sq -= v * v;
  r.p1_adj = 2 * top.chi + 3 * top.tau;
  r.obstruction = 3 * r.c1_sq + r.p1_adj;
  r.c2E_numerator = r.c1_sq - r.p1_adj;
  r.obstruction_vanishes = r.obstruction == 0;
  r.c1_sq_nonpositive = r.c1_sq <= 0;
  r.p1_divisible_by_3 = r.p1_adj % 3 == 0;
  r.c2E_integral = r.c2E_numerator % 4 == 0;
  const std::string c1 = mode == TopologyMode::u2 ? "c1(E)^2" : "c1(L)^2";
  if (r.admissible()) {
    r.verdict = "topological condition 3 " + c1 + " + 2chi + 3tau = 0 holds";
  } else {
    r.verdict = "no HKT fibration: 3 " + c1 + " + 2chi + 3tau = " + std::to_string(r.obstruction);
    if (r.obstruction_vanishes && !r.c2E_integral) r.verdict = "no HKT fibration: c2(E) is not an integer";
  }
  return r;
}

struct DiophantineSolution {
  int k = 0;
  std::vector<int> n;  // |n_p| in nonincreasing order; signs are free

  bool operator==(const DiophantineSolution& o) const { return k == o.k && n == o.n; }
};

/// All 1 <= k <= k_max and multisets |n_p| with 3 sum n_p^2 = 4 - k.
inline std::vector<DiophantineSolution> enumerate_diophantine(int k_max) {
  if (k_max < 1) throw InputError("enumerate_diophantine: k_max must be at least 1");
  std::vector<DiophantineSolution> out;
  for (int k = 1; k <= k_max; ++k) {
    const int target = 4 - k;
    if (target < 0) continue;
    const int bound = static_cast<int>(std::ceil(std::sqrt(target / 3.0)));
    std::vector<int> n(static_cast<std::size_t>(k), 0);
    // nonincreasing sequences in [0, bound]
    auto rec = [&](auto&& self, int pos, int cap, int sum) -> void {
      if (3 * sum > target) return;
      if (pos == k) {
        if (3 * sum == target) out.push_back({k, n});
        return;
      }
      for (int v = cap; v >= 0; --v) {
        n[std::size_t(pos)] = v;
        self(self, pos + 1, v, sum + v * v);
      }
    };
    rec(rec, 0, bound, 0);
  }
  return out;
}

}  // namespace tg
