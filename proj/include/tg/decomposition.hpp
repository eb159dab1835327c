#pragma once

// Splitting a geometry with parallel closed torsion into a flat factor and compact simple blocks.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tg/frame_change.hpp"
#include "tg/frame_tensor.hpp"
#include "tg/geometry.hpp"
#include "tg/report.hpp"

namespace tg {

struct TorsionGram {
  Eigen::MatrixXd h;
};

/// h_{ij} = 1/2 H_{ipq} H_{jpq}.
inline TorsionGram torsion_gram(const FrameTensor& H) {
  if (H.rank() != 3) throw InputError("torsion_gram: 3-form required");
  detail::require_form(H, "torsion_gram");
  const int n = H.dim();
  TorsionGram g{Eigen::MatrixXd::Zero(n, n)};
  if (H.is_trivially_zero()) return g;
  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t pq = 0; pq < nn; ++pq) s += H.data()[std::size_t(i) * nn + pq] * H.data()[std::size_t(j) * nn + pq];
      g.h(i, j) = 0.5 * s;
    }
  return g;
}

struct EigenCluster {
  double eigenvalue = 0.0;
  int multiplicity = 0;
  Eigen::MatrixXd basis;  // columns are orthonormal frame vectors
  bool kernel = false;
};

/// Groups eigenvalues of a symmetric matrix whose successive gaps are below cluster_tol times the largest |eigenvalue|.
inline std::vector<EigenCluster> eigen_split(const Eigen::MatrixXd& h, double cluster_tol = 1e-8) {
  if (h.rows() != h.cols()) throw InputError("eigen_split: square matrix required");
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()))
    throw InputError("eigen_split: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const Eigen::MatrixXd& V = es.eigenvectors();
  const int n = static_cast<int>(ev.size());
  const double top = ev.cwiseAbs().maxCoeff();
  const double thr = cluster_tol * (top > 0 ? top : 1.0);
  std::vector<EigenCluster> out;
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i < n && ev(i) - ev(i - 1) <= thr) continue;
    EigenCluster c;
    c.multiplicity = i - start;
    c.eigenvalue = ev.segment(start, c.multiplicity).mean();
    c.basis = V.middleCols(start, c.multiplicity);
    c.kernel = std::abs(c.eigenvalue) <= thr;
    out.push_back(std::move(c));
    start = i;
  }
  return out;
}

inline EigenCluster eigen_split_kernel(const std::vector<EigenCluster>& cl, int n) {
  for (const auto& c : cl)
    if (c.kernel) return c;
  return {0.0, 0, Eigen::MatrixXd(n, 0), true};
}

struct SemisimpleBlock {
  std::string label;
  int cluster_index = -1;
  double h_eigenvalue = 0.0;
  Eigen::MatrixXd basis;  // n x d
  FrameTensor structure;  // restriction of H to the block, in the block basis
  double jacobi = 0.0;
  double killing_defect = 0.0;  // sup |h + 1/2 Killing(H_block)|
};

struct DecompositionResult {
  bool hypotheses_met = true;
  std::vector<EigenCluster> clusters;
  int kernel_dim = 0;
  Eigen::MatrixXd kernel_basis;
  std::vector<SemisimpleBlock> blocks;
  double kernel_transversality = 0.0;
  double cluster_mixing = 0.0;
  double ideal_mixing = 0.0;
  StructureReport report;
  std::string verdict;

  std::vector<std::string> block_labels() const {
    std::vector<std::string> v;
    for (const auto& b : blocks) v.push_back(b.label);
    return v;
  }
};

namespace detail {

/// H restricted to the span of the columns of B, expressed in that basis.
inline FrameTensor restrict_form(const FrameTensor& H, const Eigen::MatrixXd& B) {
  const int n = H.dim(), d = static_cast<int>(B.cols());
  FrameTensor out = FrameTensor::form(std::max(d, 1), 3);
  if (d < 3) return out;
  std::vector<double> a1(static_cast<std::size_t>(d) * n * n, 0.0), a2(static_cast<std::size_t>(d) * d * n, 0.0);
  for (int i = 0; i < d; ++i)
    for (int x = 0; x < n; ++x) {
      const double q = B(x, i);
      if (q == 0.0) continue;
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) a1[(std::size_t(i) * n + y) * n + z] += q * H(x, y, z);
    }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) a2[(std::size_t(i) * d + j) * n + z] += B(y, j) * a1[(std::size_t(i) * n + y) * n + z];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int z = 0; z < n; ++z) s += B(z, k) * a2[(std::size_t(i) * d + j) * n + z];
        out(i, j, k) = s;
      }
  return out;
}

/// Splits a block with bracket [e_a, e_b] = T_{abc} e_c into ideals, using a random symmetric element of the commutant
/// of the adjoint representation.  Returns column bases (in block coordinates).
inline std::vector<Eigen::MatrixXd> split_ideals(const FrameTensor& T, double tol) {
  const int m = T.dim();
  std::vector<Eigen::MatrixXd> ad(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(m, m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) ad[static_cast<std::size_t>(a)](c, b) = T(a, b, c);
  // linear map X -> (ad_a X - X ad_a)_a on column-major vec(X)
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m * m * m, m * m);
  for (int a = 0; a < m; ++a) {
    const Eigen::MatrixXd& A = ad[static_cast<std::size_t>(a)];
    for (int col = 0; col < m * m; ++col) {
      Eigen::MatrixXd X = Eigen::MatrixXd::Zero(m, m);
      X(col % m, col / m) = 1.0;
      const Eigen::MatrixXd C = A * X - X * A;
      L.block(a * m * m, col, m * m, 1) = Eigen::Map<const Eigen::VectorXd>(C.data(), m * m);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m * m; ++k) {
    const double s = k < sv.size() ? sv(k) : 0.0;
    if (s > 1e-9 * std::max(smax, 1e-300)) continue;
    const Eigen::VectorXd v = svd.matrixV().col(k);
    Z += nd(rng) * Eigen::Map<const Eigen::MatrixXd>(v.data(), m, m);
  }
  Z = 0.5 * (Z + Z.transpose());
  std::vector<Eigen::MatrixXd> ideals;
  for (const auto& c : eigen_split(Z, std::max(tol, 1e-6))) ideals.push_back(c.basis);
  return ideals;
}

inline double killing_defect(const FrameTensor& T, const Eigen::MatrixXd& h_block) {
  const int m = T.dim();
  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double K = 0.0;
      for (int d = 0; d < m; ++d)
        for (int e = 0; e < m; ++e) K += T(a, e, d) * T(b, d, e);
      worst = std::max(worst, std::abs(h_block(a, b) + 0.5 * K));
    }
  return worst;
}

inline std::string identify_block(int dim) {
  switch (dim) {
    case 3: return "su(2)";
    case 8: return "su(3)";
    default: return "semisimple, unidentified";
  }
}

}  // namespace detail

/// Hypotheses dH = 0 and nabla^ H = 0 are checked first; the result is flagged and left empty when they fail.
inline DecompositionResult decompose(const LieFrameGeometry& geom, const Tolerances& tol = {}) {
  DecompositionResult res;
  StructureReport& rep = res.report;
  rep.title = "decomposition";
  const FrameTensor& H = geom.H();
  const int n = geom.dim();
  const double dH = d_invariant(H, geom).sup_norm();
  const double nh = nabla_invariant(H, with_torsion(geom, 1)).sup_norm();
  rep.add("hypothesis_dH", "dH = 0", dH, tol.residual);
  rep.add("hypothesis_nabla_hat_H", "nabla^ H = 0", nh, tol.residual);
  if (dH > tol.residual || nh > tol.residual) {
    res.hypotheses_met = false;
    rep.hypotheses_met = false;
    rep.note("hypotheses not met: torsion must be closed and nabla^-parallel");
    res.verdict = "hypotheses not met; no decomposition";
    return res;
  }

  const TorsionGram g = torsion_gram(H);
  res.clusters = eigen_split(g.h, tol.cluster);
  const EigenCluster ker = eigen_split_kernel(res.clusters, n);
  res.kernel_dim = ker.multiplicity;
  res.kernel_basis = ker.basis;
  double min_eig = 0.0;
  for (const auto& c : res.clusters) min_eig = std::min(min_eig, c.eigenvalue);
  rep.add("gram_psd", "h positive semidefinite", -min_eig, tol.residual);

  for (int k = 0; k < ker.multiplicity; ++k) {
    std::vector<double> v(ker.basis.col(k).data(), ker.basis.col(k).data() + n);
    res.kernel_transversality = std::max(res.kernel_transversality, interior_product(FrameTensor::vector(v), H).sup_norm());
  }
  rep.add("kernel_transversality", "iota_V H = 0 for V in ker h", res.kernel_transversality, tol.residual);

  // H in the h-eigenbasis: no component may mix distinct clusters.
  Eigen::MatrixXd Q(n, n);
  std::vector<int> owner(static_cast<std::size_t>(n));
  {
    int col = 0;
    for (std::size_t ci = 0; ci < res.clusters.size(); ++ci)
      for (int k = 0; k < res.clusters[ci].multiplicity; ++k) {
        Q.col(col) = res.clusters[ci].basis.col(k);
        owner[static_cast<std::size_t>(col)] = static_cast<int>(ci);
        ++col;
      }
  }
  const FrameTensor Hq = rotate_covariant(H, Q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const int oi = owner[std::size_t(i)], oj = owner[std::size_t(j)], ok = owner[std::size_t(k)];
        if (oi != oj || oj != ok) res.cluster_mixing = std::max(res.cluster_mixing, std::abs(Hq(i, j, k)));
      }
  rep.add("cluster_mixing", "H has no component mixing distinct h-eigenspaces", res.cluster_mixing, tol.residual);

  for (std::size_t ci = 0; ci < res.clusters.size(); ++ci) {
    const EigenCluster& cl = res.clusters[ci];
    if (cl.kernel) continue;
    const FrameTensor T = detail::restrict_form(H, cl.basis);
    const auto ideals = detail::split_ideals(T, tol.cluster);
    Eigen::MatrixXd P(cl.multiplicity, cl.multiplicity);
    std::vector<int> ideal_of(static_cast<std::size_t>(cl.multiplicity));
    int col = 0;
    for (std::size_t q = 0; q < ideals.size(); ++q)
      for (int k = 0; k < ideals[q].cols(); ++k) {
        P.col(col) = ideals[q].col(k);
        ideal_of[std::size_t(col)] = static_cast<int>(q);
        ++col;
      }
    const FrameTensor Tp = rotate_covariant(T, P);
    for (int i = 0; i < cl.multiplicity; ++i)
      for (int j = 0; j < cl.multiplicity; ++j)
        for (int k = 0; k < cl.multiplicity; ++k)
          if (ideal_of[std::size_t(i)] != ideal_of[std::size_t(j)] || ideal_of[std::size_t(j)] != ideal_of[std::size_t(k)])
            res.ideal_mixing = std::max(res.ideal_mixing, std::abs(Tp(i, j, k)));
    for (const auto& I : ideals) {
      SemisimpleBlock b;
      b.cluster_index = static_cast<int>(ci);
      b.h_eigenvalue = cl.eigenvalue;
      b.basis = cl.basis * I;
      b.structure = detail::restrict_form(H, b.basis);
      b.jacobi = jacobi_residual(b.structure);
      b.killing_defect = detail::killing_defect(b.structure, b.basis.transpose() * g.h * b.basis);
      b.label = detail::identify_block(static_cast<int>(b.basis.cols()));
      res.blocks.push_back(std::move(b));
    }
  }
  rep.add("ideal_mixing", "H has no component mixing distinct ideals", res.ideal_mixing, tol.residual);
  for (std::size_t k = 0; k < res.blocks.size(); ++k) {
    const auto& b = res.blocks[k];
    const std::string tag = "block" + std::to_string(k) + "_";
    rep.add(tag + "jacobi", "H^p_{ij} H_{pkm} + cyclic(ijk) = 0 on the block", b.jacobi, tol.residual);
    rep.add(tag + "killing", "h = -1/2 Killing form of the block", b.killing_defect, tol.residual);
  }

  std::ostringstream v;
  v << "kernel " << res.kernel_dim << ", blocks [";
  for (std::size_t k = 0; k < res.blocks.size(); ++k) v << (k ? ", " : "") << res.blocks[k].label;
  v << "]";
  if (rep.passed()) {
    v << "; local model: flat R^" << res.kernel_dim;
    if (!res.blocks.empty()) {
      v << " x compact group with Lie algebra ";
      for (std::size_t k = 0; k < res.blocks.size(); ++k) v << (k ? " + " : "") << res.blocks[k].label;
    }
    v << " (algebraic certificate only)";
  } else {
    v << "; certificate failed";
  }
  res.verdict = v.str();
  return res;
}

}  // namespace tg
