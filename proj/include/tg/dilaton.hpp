#pragma once

// Monotone sub/supersolution iteration for -lap u + u^2 = w on periodic grids.

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tg/frame_tensor.hpp"
#include "tg/report.hpp"

namespace tg {

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Discrete Laplacian L0 (nonpositive, annihilates constants) on a periodic grid.
struct DiscreteDomain {
  std::vector<int> shape;
  double spacing = 1.0;
  Eigen::SparseMatrix<double> laplacian;
  Eigen::VectorXd weights;

  int node_count() const { return static_cast<int>(laplacian.rows()); }

  /// Coordinates of node i along axis.
  double coord(int i, int axis) const {
    for (int a = 0; a < axis; ++a) i /= shape[std::size_t(a)];
    return spacing * (i % shape[std::size_t(axis)]);
  }

  double length(int axis) const { return spacing * shape[std::size_t(axis)]; }

  /// Max of |row sum|, |W L - (W L)^T| and positive part of the largest off-diagonal of -L0.
  double m_matrix_defect() const {
    double worst = 0.0;
    Eigen::VectorXd rows = laplacian * Eigen::VectorXd::Ones(node_count());
    worst = std::max(worst, rows.cwiseAbs().maxCoeff());
    const Eigen::SparseMatrix<double> WL = weights.asDiagonal() * laplacian;
    const Eigen::SparseMatrix<double> asym = WL - Eigen::SparseMatrix<double>(WL.transpose());
    for (int k = 0; k < asym.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(asym, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    for (int k = 0; k < laplacian.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(laplacian, k); it; ++it)
        if (it.row() != it.col()) worst = std::max(worst, -it.value());
    return worst;
  }
};

/// Periodic (2d)-point stencil on a grid of the given shape.
inline DiscreteDomain build_periodic_grid(const std::vector<int>& shape, double spacing) {
  if (shape.empty()) throw InputError("periodic grid: at least one axis required");
  long long total = 1;
  for (int s : shape) {
    if (s < 3) throw InputError("periodic grid: every axis needs at least 3 nodes");
    total *= s;
  }
  if (total > (1LL << 24)) throw InputError("periodic grid: too many nodes");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InputError("periodic grid: spacing must be positive");
  const int n = static_cast<int>(total);
  const double inv = 1.0 / (spacing * spacing);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(std::size_t(n) * (2 * shape.size() + 1));
  std::vector<int> stride(shape.size(), 1);
  for (std::size_t a = 1; a < shape.size(); ++a) stride[a] = stride[a - 1] * shape[a - 1];
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, i, -2.0 * double(shape.size()) * inv);
    for (std::size_t a = 0; a < shape.size(); ++a) {
      const int x = (i / stride[a]) % shape[a];
      const int up = i + (x + 1 == shape[a] ? -(shape[a] - 1) : 1) * stride[a];
      const int dn = i + (x == 0 ? (shape[a] - 1) : -1) * stride[a];
      trip.emplace_back(i, up, inv);
      trip.emplace_back(i, dn, inv);
    }
  }
  DiscreteDomain d;
  d.shape = shape;
  d.spacing = spacing;
  d.laplacian.resize(n, n);
  d.laplacian.setFromTriplets(trip.begin(), trip.end());
  d.weights = Eigen::VectorXd::Constant(n, std::pow(spacing, double(shape.size())));
  return d;
}

inline DiscreteDomain build_flat_torus(int n1, int n2, double spacing) { return build_periodic_grid({n1, n2}, spacing); }

struct DilatonBounds {
  double a = 0.0;  // constant subsolution
  double b = 0.0;  // constant supersolution
};

/// a = sqrt(w_min) / 2, b = sqrt(w_max); w must be strictly positive.
inline DilatonBounds bounds(const Eigen::VectorXd& w) {
  if (w.size() == 0) throw InputError("bounds: empty field");
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (!(w(i) > 0.0) || !std::isfinite(w(i)))
      throw InputError("bounds: w must be strictly positive and finite; node " + std::to_string(i) + " has " + std::to_string(w(i)));
  return {0.5 * std::sqrt(w.minCoeff()), std::sqrt(w.maxCoeff())};
}

/// Auto: 2b + 1. Explicit values must exceed 2b.
inline double pick_lambda(double b, std::optional<double> explicit_lambda = std::nullopt) {
  if (!(b > 0.0)) throw InputError("pick_lambda: b must be positive");
  if (!explicit_lambda) return 2.0 * b + 1.0;
  if (!(*explicit_lambda > 2.0 * b))
    throw InputError("pick_lambda: lambda = " + std::to_string(*explicit_lambda) + " must exceed 2b = " + std::to_string(2.0 * b));
  return *explicit_lambda;
}

/// Factorized (-L0 + lambda) with a conjugate-gradient fallback.
class ShiftedLaplacianSolver {
 public:
  ShiftedLaplacianSolver(const DiscreteDomain& d, double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0)) throw InputError("linear_solve: lambda must be positive");
    const int n = d.node_count();
    Eigen::SparseMatrix<double> I(n, n);
    I.setIdentity();
    A_ = lambda * I - d.laplacian;
    A_.makeCompressed();
    ldlt_.compute(A_);
    direct_ = ldlt_.info() == Eigen::Success;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    if (rhs.size() != A_.rows()) throw InputError("linear_solve: rhs size mismatch");
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    Eigen::VectorXd u;
    if (direct_) {
      u = ldlt_.solve(rhs);
      if (relative_residual(u, rhs, scale) <= kRelTol) return u;
    }
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-14);
    cg.setMaxIterations(std::max<Eigen::Index>(1000, 10 * A_.rows()));
    cg.compute(A_);
    if (direct_) {
      u = cg.solveWithGuess(rhs, u);
    } else {
      u = cg.solve(rhs);
    }
    if (relative_residual(u, rhs, scale) > kRelTol) throw ConvergenceError("linear_solve: no convergence within the iteration budget");
    return u;
  }

  const Eigen::SparseMatrix<double>& matrix() const { return A_; }
  double lambda() const { return lambda_; }
  bool direct() const { return direct_; }

 private:
  static constexpr double kRelTol = 1e-12;

  double relative_residual(const Eigen::VectorXd& u, const Eigen::VectorXd& rhs, double scale) const {
    return (A_ * u - rhs).cwiseAbs().maxCoeff() / scale;
  }

  double lambda_;
  Eigen::SparseMatrix<double> A_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  bool direct_ = false;
};

/// Solves (-L0 + lambda) u = rhs.
inline Eigen::VectorXd linear_solve(const DiscreteDomain& d, double lambda, const Eigen::VectorXd& rhs) {
  return ShiftedLaplacianSolver(d, lambda).solve(rhs);
}

/// G(u) = -L0 u + u^2 - w.
inline Eigen::VectorXd residual(const DiscreteDomain& d, const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  if (u.size() != d.node_count() || w.size() != d.node_count()) throw InputError("residual: field size mismatch");
  return -(d.laplacian * u) + u.cwiseProduct(u) - w;
}

struct SolverConfig {
  std::optional<double> lambda;  // nullopt = auto
  double tol = 1e-10;
  int max_iter = 10000;
};

struct IterationStep {
  double step_sup = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double residual_sup = 0.0;
  bool monotone_ok = true;
  bool bounds_ok = true;
};

struct IterationTrace {
  std::vector<IterationStep> steps;
  double a = 0.0, b = 0.0, lambda = 0.0;
  bool converged = false;
  double final_residual = 0.0;
  double residual_bound = 0.0;  // 10 tol (lambda + 2b)
  bool direct_solver = true;

  int iterations() const { return static_cast<int>(steps.size()); }
};

struct DilatonSolution {
  Eigen::VectorXd u;
  IterationTrace trace;
};

/// u_0 = a, (-L0 + lambda) u_{n+1} = w - u_n^2 + lambda u_n; every step must satisfy a <= u_n <= u_{n+1} <= b.
inline DilatonSolution monotone_iterate(const DiscreteDomain& d, const Eigen::VectorXd& w, const SolverConfig& cfg = {}) {
  if (w.size() != d.node_count()) throw InputError("monotone_iterate: w size mismatch");
  if (!(cfg.tol > 0.0)) throw InputError("monotone_iterate: tol must be positive");
  if (cfg.max_iter < 1) throw InputError("monotone_iterate: max_iter must be positive");
  const DilatonBounds ab = bounds(w);
  DilatonSolution out;
  IterationTrace& tr = out.trace;
  tr.a = ab.a;
  tr.b = ab.b;
  tr.lambda = pick_lambda(ab.b, cfg.lambda);
  const ShiftedLaplacianSolver solver(d, tr.lambda);
  tr.direct_solver = solver.direct();
  const double slack = 1e-12 * ab.b;
  Eigen::VectorXd u = Eigen::VectorXd::Constant(d.node_count(), ab.a);
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Eigen::VectorXd rhs = w - u.cwiseProduct(u) + tr.lambda * u;
    Eigen::VectorXd next = solver.solve(rhs);
    IterationStep s;
    s.step_sup = (next - u).cwiseAbs().maxCoeff();
    s.u_min = next.minCoeff();
    s.u_max = next.maxCoeff();
    s.residual_sup = residual(d, next, w).cwiseAbs().maxCoeff();
    s.monotone_ok = (next - u).minCoeff() >= -slack;
    s.bounds_ok = s.u_min >= ab.a - slack && s.u_max <= ab.b + slack;
    tr.steps.push_back(s);
    if (!s.monotone_ok) throw InvariantViolation("monotone_iterate: iterate decreased at step " + std::to_string(it + 1));
    if (!s.bounds_ok) throw InvariantViolation("monotone_iterate: iterate left [a, b] at step " + std::to_string(it + 1));
    u = std::move(next);
    if (s.step_sup < cfg.tol) {
      tr.converged = true;
      break;
    }
  }
  tr.final_residual = residual(d, u, w).cwiseAbs().maxCoeff();
  tr.residual_bound = 10.0 * cfg.tol * (tr.lambda + 2.0 * tr.b);
  if (!tr.converged) throw ConvergenceError("monotone_iterate: max_iter reached without convergence");
  out.u = std::move(u);
  return out;
}

/// Named right-hand sides: "constant-4" (w = 4) and "sin-bump" (w = 4 + 2 sin sin over the first two axes).
inline Eigen::VectorXd w_preset(const std::string& name, const DiscreteDomain& d) {
  const int n = d.node_count();
  if (name == "constant-4") return Eigen::VectorXd::Constant(n, 4.0);
  if (name == "sin-bump") {
    if (d.shape.size() < 2) throw InputError("w_preset: sin-bump needs two axes");
    Eigen::VectorXd w(n);
    const double tau = 2.0 * std::numbers::pi;
    for (int i = 0; i < n; ++i)
      w(i) = 4.0 + 2.0 * std::sin(tau * d.coord(i, 0) / d.length(0)) * std::sin(tau * d.coord(i, 1) / d.length(1));
    return w;
  }
  throw InputError("w_preset: unknown preset " + name);
}

inline std::vector<std::string> w_preset_names() { return {"constant-4", "sin-bump"}; }

}  // namespace tg
