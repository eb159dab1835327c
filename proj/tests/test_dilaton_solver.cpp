#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tg/dilaton.hpp"

using namespace tg;

namespace {

Eigen::VectorXd cos_mode(const DiscreteDomain& d, int axis) {
  Eigen::VectorXd v(d.node_count());
  for (int i = 0; i < d.node_count(); ++i) v(i) = std::cos(2.0 * std::numbers::pi * d.coord(i, axis) / d.length(axis));
  return v;
}

// Smooth positive w on a torus of side L, evaluated at the grid nodes.
Eigen::VectorXd smooth_w(const DiscreteDomain& d) {
  Eigen::VectorXd w(d.node_count());
  const double tau = 2.0 * std::numbers::pi;
  for (int i = 0; i < d.node_count(); ++i) {
    const double x = d.coord(i, 0) / d.length(0), y = d.coord(i, 1) / d.length(1);
    w(i) = 3.0 + std::sin(tau * x) + 0.5 * std::cos(tau * (x + 2.0 * y));
  }
  return w;
}

}  // namespace

TEST(FlatTorus, Construction) {
  const DiscreteDomain d = build_flat_torus(5, 7, 0.3);
  EXPECT_EQ(d.node_count(), 35);
  EXPECT_LT((d.laplacian * Eigen::VectorXd::Constant(35, 2.5)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(d.m_matrix_defect(), 1e-12);
  for (int axis : {0, 1}) {
    const Eigen::VectorXd v = cos_mode(d, axis);
    const double n = d.shape[std::size_t(axis)];
    const double mu = -(2.0 - 2.0 * std::cos(2.0 * std::numbers::pi / n)) / (0.3 * 0.3);
    EXPECT_LT((d.laplacian * v - mu * v).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_THROW(build_flat_torus(2, 5, 1.0), InputError);
  EXPECT_THROW(build_flat_torus(4, 4, 0.0), InputError);
}

TEST(FlatTorus, FourDimensionalGrid) {
  const DiscreteDomain d = build_periodic_grid({4, 4, 4, 4}, 0.5);
  EXPECT_EQ(d.node_count(), 256);
  EXPECT_LT(d.m_matrix_defect(), 1e-12);
  const Eigen::VectorXd sol = monotone_iterate(d, Eigen::VectorXd::Constant(256, 9.0)).u;
  EXPECT_LT((sol.array() - 3.0).abs().maxCoeff(), 1e-9);
}

TEST(Bounds, Examples) {
  const DilatonBounds c = bounds(Eigen::VectorXd::Constant(10, 4.0));
  EXPECT_EQ(c.a, 1.0);
  EXPECT_EQ(c.b, 2.0);
  Eigen::VectorXd w(3);
  w << 1.0, 5.0, 9.0;
  const DilatonBounds r = bounds(w);
  EXPECT_EQ(r.a, 0.5);
  EXPECT_EQ(r.b, 3.0);
  w(1) = 0.0;
  EXPECT_THROW(bounds(w), InputError);
  w(1) = -1.0;
  EXPECT_THROW(bounds(w), InputError);
}

TEST(PickLambda, Policies) {
  EXPECT_EQ(pick_lambda(2.0), 5.0);
  EXPECT_THROW(pick_lambda(2.0, 4.0), InputError);
  EXPECT_EQ(pick_lambda(2.0, 4.5), 4.5);
  EXPECT_THROW(pick_lambda(0.0), InputError);
}

TEST(LinearSolve, Examples) {
  const DiscreteDomain d = build_flat_torus(8, 6, 0.25);
  const double lambda = 3.0;
  const Eigen::VectorXd c = linear_solve(d, lambda, Eigen::VectorXd::Constant(48, 6.0));
  EXPECT_LT((c.array() - 2.0).abs().maxCoeff(), 1e-14);
  const Eigen::VectorXd v = cos_mode(d, 0);
  const double mu = -(2.0 - 2.0 * std::cos(2.0 * std::numbers::pi / 8.0)) / (0.25 * 0.25);
  EXPECT_LT((linear_solve(d, lambda, v) - v / (lambda - mu)).cwiseAbs().maxCoeff(), 1e-14);
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd;
  Eigen::VectorXd rhs(48);
  for (int i = 0; i < 48; ++i) rhs(i) = nd(rng);
  const ShiftedLaplacianSolver s(d, lambda);
  EXPECT_LT((s.matrix() * s.solve(rhs) - rhs).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(linear_solve(d, 0.0, rhs), InputError);
}

TEST(LinearSolveProperty, OrderPreserving) {
  const DiscreteDomain d = build_flat_torus(16, 16, 0.2);
  const ShiftedLaplacianSolver s(d, 2.5);
  std::mt19937_64 rng(32);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd r1(256), r2(256);
    for (int i = 0; i < 256; ++i) {
      r1(i) = nd(rng);
      r2(i) = r1(i) + (ud(rng) < 0.3 ? ud(rng) : 0.0);
    }
    const Eigen::VectorXd diff = s.solve(r2) - s.solve(r1);
    EXPECT_GE(diff.minCoeff(), -1e-13);
  }
}

TEST(MonotoneMapProperty, MapsBoxToItself) {
  const DiscreteDomain d = build_flat_torus(12, 12, 0.3);
  const Eigen::VectorXd w = smooth_w(d);
  const DilatonBounds ab = bounds(w);
  const double lambda = pick_lambda(ab.b);
  const ShiftedLaplacianSolver s(d, lambda);
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> ud(ab.a, ab.b);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd u(d.node_count());
    for (int i = 0; i < u.size(); ++i) u(i) = ud(rng);
    const Eigen::VectorXd Tu = s.solve(w - u.cwiseProduct(u) + lambda * u);
    EXPECT_GE(Tu.minCoeff(), ab.a - 1e-12);
    EXPECT_LE(Tu.maxCoeff(), ab.b + 1e-12);
  }
}

TEST(Residual, SubAndSupersolution) {
  const DiscreteDomain d = build_flat_torus(10, 10, 0.4);
  const Eigen::VectorXd w = smooth_w(d);
  const DilatonBounds ab = bounds(w);
  const Eigen::VectorXd Ga = residual(d, Eigen::VectorXd::Constant(100, ab.a), w);
  const Eigen::VectorXd Gb = residual(d, Eigen::VectorXd::Constant(100, ab.b), w);
  EXPECT_LE(Ga.maxCoeff(), -0.75 * w.minCoeff() + 1e-12);
  EXPECT_GE(Gb.minCoeff(), -1e-12);
  EXPECT_LT(residual(d, Eigen::VectorXd::Constant(100, 2.0), Eigen::VectorXd::Constant(100, 4.0)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MonotoneIterate, ConstantW) {
  for (int n : {4, 9}) {
    const DiscreteDomain d = build_flat_torus(n, n + 1, 0.5);
    const DilatonSolution sol = monotone_iterate(d, Eigen::VectorXd::Constant(d.node_count(), 4.0));
    EXPECT_TRUE(sol.trace.converged);
    EXPECT_LT((sol.u.array() - 2.0).abs().maxCoeff(), 1e-8);
  }
}

TEST(MonotoneIterate, SinBumpOn64Grid) {
  const DiscreteDomain d = build_flat_torus(64, 64, 0.1);
  const Eigen::VectorXd w = w_preset("sin-bump", d);
  const DilatonSolution sol = monotone_iterate(d, w);
  const IterationTrace& tr = sol.trace;
  EXPECT_TRUE(tr.converged);
  EXPECT_EQ(tr.lambda, 2.0 * tr.b + 1.0);
  for (const auto& s : tr.steps) {
    EXPECT_TRUE(s.monotone_ok);
    EXPECT_TRUE(s.bounds_ok);
  }
  // independent residual evaluation with the 5-point stencil
  const int n = 64;
  double worst = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      auto U = [&](int a, int b) { return sol.u(((b + n) % n) * n + (a + n) % n); };
      const double lap = (U(i + 1, j) + U(i - 1, j) + U(i, j + 1) + U(i, j - 1) - 4.0 * U(i, j)) / 0.01;
      worst = std::max(worst, std::abs(-lap + U(i, j) * U(i, j) - w(j * n + i)));
    }
  EXPECT_LT(worst, 1e-8);
  EXPECT_LT(tr.final_residual, 1e-8);
  EXPECT_LE(tr.final_residual, tr.residual_bound);
  EXPECT_GT(sol.u.minCoeff(), 0.0);
  RecordProperty("iterations", tr.iterations());
}

TEST(MonotoneIterate, TighterToleranceNeedsMoreStepsSameLimit) {
  const DiscreteDomain d = build_flat_torus(24, 24, 0.2);
  const Eigen::VectorXd w = smooth_w(d);
  const DilatonSolution loose = monotone_iterate(d, w, {std::nullopt, 1e-6, 10000});
  const DilatonSolution tight = monotone_iterate(d, w, {std::nullopt, 1e-10, 10000});
  EXPECT_GT(tight.trace.iterations(), loose.trace.iterations());
  EXPECT_LT((tight.u - loose.u).cwiseAbs().maxCoeff(), 1e-6 * 10.0);
}

TEST(MonotoneIterate, Errors) {
  const DiscreteDomain d = build_flat_torus(6, 6, 0.5);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(36, 4.0);
  EXPECT_THROW(monotone_iterate(d, w, {std::nullopt, 1e-14, 2}), ConvergenceError);
  EXPECT_THROW(monotone_iterate(d, w, {3.0, 1e-10, 100}), InputError);
  w(5) = 0.0;
  EXPECT_THROW(monotone_iterate(d, w), InputError);
  EXPECT_THROW(monotone_iterate(d, Eigen::VectorXd::Constant(35, 4.0)), InputError);
}

TEST(MonotoneIterateProperty, GridRefinementSecondOrder) {
  const double L = 2.0 * std::numbers::pi;
  std::vector<Eigen::VectorXd> sols;
  for (int n : {32, 64, 128}) {
    const DiscreteDomain d = build_flat_torus(n, n, L / n);
    sols.push_back(monotone_iterate(d, smooth_w(d), {std::nullopt, 1e-12, 10000}).u);
  }
  // compare on the 32x32 common nodes against the finest grid
  auto err = [&](int coarse_index, int n) {
    const int f = 128 / n;
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(sols[std::size_t(coarse_index)](j * n + i) - sols[2](j * f * 128 + i * f)));
    return worst;
  };
  const double e32 = err(0, 32), e64 = err(1, 64);
  EXPECT_GT(e32, 0.0);
  // e(h) - e(h/4) scales as h^2 (1 - 1/16) versus (h/2)^2 (1 - 1/4): ratio 5
  EXPECT_NEAR(e32 / e64, 5.0, 0.5);
  RecordProperty("e32", std::to_string(e32));
  RecordProperty("e64", std::to_string(e64));
}
