#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "tg/tg.hpp"

using namespace tg;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds, 0 for none
  std::function<void(Outcome&)> run;
};

void bianchi_suite(Outcome& o) {
  GeometrySampler s(1001);
  double first = 0.0, second = 0.0, pair = 0.0;
  int closed = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 4;
    const LieFrameGeometry g = t % 2 ? s.random_geometry(n) : s.random_closed_geometry(n);
    const StructureReport r = bianchi_report(g);
    first = std::max(first, r.value("bianchi_first"));
    second = std::max(second, r.value("bianchi_second"));
    if (r.find("pair_symmetry")->asserted) {
      ++closed;
      pair = std::max(pair, r.value("pair_symmetry"));
    }
  }
  o.check(first <= 1e-10, "first identity");
  o.check(second <= 1e-10, "second identity");
  o.check(closed > 0 && pair <= 1e-10, "pair symmetry on closed samples");
  o.detail << "samples 100, closed " << closed << ", max first " << first << ", second " << second << ", pair " << pair;
}

void lccc_suite(Outcome& o) {
  GeometrySampler s(1002);
  int met = 0;
  double nabla = 0.0, jac = 0.0;
  auto consider = [&](const LieFrameGeometry& g) {
    const StructureReport r = bianchi_report(g, BianchiCheck::lccc);
    if (!r.hypotheses_met) return;
    ++met;
    nabla = std::max(nabla, r.value("lccc_nabla_H"));
    jac = std::max(jac, r.value("lccc_jacobi_H"));
  };
  for (int t = 0; t < 100; ++t) consider(s.random_biinvariant_geometry(3 + t % 7));
  for (int t = 0; t < 50; ++t) consider(s.random_closed_geometry(3 + t % 4));
  consider(build_su3().geom);
  o.check(met >= 50, "enough samples meet the hypotheses");
  o.check(nabla <= 1e-10, "nabla H = 0");
  o.check(jac <= 1e-10, "Jacobi(H) = 0");
  o.detail << "samples meeting hypotheses " << met << ", max |nabla H| " << nabla << ", max Jacobi(H) " << jac;
}

void su3_suite(Outcome& o) {
  const Su3Data su3 = build_su3();
  const StructureReport r = hkt_report(su3.geom, su3.triple, EpsilonOrientation(8, 1));
  double worst = 0.0;
  for (const auto& row : r.rows)
    if (row.asserted) worst = std::max(worst, row.value);
  o.check(r.passed() && worst <= 1e-10, "hkt_report");
  o.check(su3.h_alpha_minus_beta_norm2 == 6.0, "<h, h> = 6");
  const DecompositionResult d = decompose(su3.geom);
  o.check(d.kernel_dim == 0 && d.blocks.size() == 1 && d.blocks[0].basis.cols() == 8, "decompose: kernel 0, one block of dim 8");
  o.detail << "hkt rows " << r.rows.size() << ", max residual " << worst << ", <h,h> " << su3.h_alpha_minus_beta_norm2 << ", " << d.verdict;
}

void desk_cases(Outcome& o) {
  const DecompositionResult a = decompose(catalog_entry("su2-plus-abelian3").geom);
  o.check(a.kernel_dim == 3 && a.block_labels() == std::vector<std::string>{"su(2)"}, "su(2) + R^3");
  const FrameTensor c = direct_sum({su2_structure(), su2_structure(), abelian_structure(2)});
  const FrameTensor H = direct_sum({cartan_form(su2_structure(), -1.0), cartan_form(su2_structure(), -1.0), FrameTensor::form(2, 3)});
  const DecompositionResult b = decompose(LieFrameGeometry::make(c, H));
  o.check(b.kernel_dim == 2 && b.block_labels() == std::vector<std::string>{"su(2)", "su(2)"}, "su(2) + su(2) + R^2");
  const GeometryDocument hkt = catalog_entry("su2su2");
  o.check(hkt_report(hkt.geom, *hkt.triple, hkt.orient()).passed(), "R^2 x SU(2) x SU(2) is HKT");
  o.check(a.report.passed() && b.report.passed(), "decomposition diagnostics");
  o.detail << a.verdict << " | " << b.verdict;
}

void g2_spin7(Outcome& o) {
  const G2Data g2 = build_g2_standard();
  const double bdev = (bryant_positivity(g2) - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff();
  o.check(bdev <= 1e-12, "B(standard phi) = identity");
  const CayleyData sp = build_spin7(g2);
  const double ww = std::abs(wedge_volume_coefficient(sp.Phi, sp.Phi, sp.orient) - 14.0);
  const double sd = (hodge_star(sp.Phi, sp.orient) - sp.Phi).sup_norm();
  o.check(ww <= 1e-12 && sd <= 1e-12, "Phi ^ Phi = 14 vol and *Phi = Phi");
  const LieFrameGeometry g = su2_times_flat4();
  int positive_orientations = 0;
  for (int sign : {1, -1}) {
    const G2Data p = build_g2_flat_product(false, EpsilonOrientation(7, sign));
    if (definiteness(bryant_positivity(p)) == Definiteness::positive) ++positive_orientations;
  }
  o.check(positive_orientations == 1, "product phi positive in exactly one orientation");
  const double par = parallel_residual(build_g2_flat_product(false).phi, g, 1);
  o.check(par <= 1e-10, "product phi parallel on su(2) + R^4");
  o.detail << "|B - 1| " << bdev << ", |Phi^Phi - 14| " << ww << ", |*Phi - Phi| " << sd << ", positive orientations " << positive_orientations
           << ", |nabla^ phi| " << par;
}

void fibration(Outcome& o) {
  const Su3Fibration fib = build_su3_fibration();
  const double fr = frestrict_residual(fib.curvature, epsilon_representation(1.0), fib.base);
  const double wt = wedge_trace(fib.curvature).sup_norm();
  const double asd = sd_asd_split(fib.curvature.F[0], fib.orient).first.sup_norm();
  o.check(fr <= 1e-12, "frestrict");
  o.check(wt <= 1e-12, "wedge_trace");
  o.check(asd <= 1e-12 && fib.curvature.F[0].sup_norm() > 0.1, "u(1) component anti-self-dual and nonzero");
  o.detail << "frestrict " << fr << ", wedge_trace " << wt << ", |F0_+| " << asd;
}

void topology(Outcome& o) {
  const TopologyResult cp2 = chern_topology(TopologyData::blowups({1}));
  o.check(cp2.obstruction == 0 && cp2.c2E() == -1.0, "CP2-bar");
  const TopologyResult s4 = chern_topology(TopologyData::s4());
  o.check(s4.obstruction == 4 && !s4.admissible(), "S4");
  const auto sols = enumerate_diophantine(12);
  o.check(sols == std::vector<DiophantineSolution>{{1, {1}}, {4, {0, 0, 0, 0}}}, "Diophantine k <= 12");
  o.detail << "CP2-bar obstruction " << cp2.obstruction << " c2E " << cp2.c2E() << ", S4 obstruction " << s4.obstruction
           << ", solutions " << sols.size();
}

void dilaton(Outcome& o) {
  const DiscreteDomain d64 = build_flat_torus(64, 64, 0.1);
  const DilatonSolution c = monotone_iterate(d64, Eigen::VectorXd::Constant(d64.node_count(), 4.0));
  const double cerr = (c.u.array() - 2.0).abs().maxCoeff();
  o.check(cerr <= 1e-8, "constant w = 4");

  const Eigen::VectorXd w = w_preset("sin-bump", d64);
  const DilatonSolution s = monotone_iterate(d64, w);
  bool mono = true;
  for (const auto& st : s.trace.steps) mono = mono && st.monotone_ok && st.bounds_ok;
  o.check(s.trace.converged && mono && s.trace.final_residual < 1e-8, "sin-bump on 64x64");

  const ShiftedLaplacianSolver lin(d64, s.trace.lambda);
  std::mt19937_64 rng(1008);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  int ordered = 0;
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd r1(d64.node_count()), r2(d64.node_count());
    for (int i = 0; i < r1.size(); ++i) {
      r1(i) = nd(rng);
      r2(i) = r1(i) + (ud(rng) < 0.3 ? ud(rng) : 0.0);
    }
    if ((lin.solve(r2) - lin.solve(r1)).minCoeff() >= -1e-12) ++ordered;
  }
  o.check(ordered == 50, "order preservation");

  const double L = 2.0 * std::numbers::pi;
  auto smooth = [&](const DiscreteDomain& d) {
    Eigen::VectorXd v(d.node_count());
    for (int i = 0; i < d.node_count(); ++i) {
      const double x = d.coord(i, 0) / d.length(0), y = d.coord(i, 1) / d.length(1);
      v(i) = 3.0 + std::sin(L * x) + 0.5 * std::cos(L * (x + 2.0 * y));
    }
    return v;
  };
  std::vector<Eigen::VectorXd> sols;
  for (int n : {32, 64, 128}) {
    const DiscreteDomain d = build_flat_torus(n, n, L / n);
    sols.push_back(monotone_iterate(d, smooth(d), {std::nullopt, 1e-12, 10000}).u);
  }
  auto err = [&](std::size_t k, int n) {
    const int f = 128 / n;
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(sols[k](j * n + i) - sols[2](j * f * 128 + i * f)));
    return worst;
  };
  const double e32 = err(0, 32), e64 = err(1, 64);
  const double ratio = e32 / e64;
  o.check(std::abs(ratio - 5.0) <= 0.5, "second-order refinement");
  o.detail << "constant err " << cerr << ", sin-bump iterations " << s.trace.iterations() << " residual " << s.trace.final_residual
           << ", ordered pairs " << ordered << "/50, refinement ratio " << ratio;
}

void negative_controls(Outcome& o) {
  FrameTensor H = FrameTensor::form(5, 3);
  H.add_form_component(std::vector<int>{0, 3, 4}, 1.0);
  const LieFrameGeometry g = LieFrameGeometry::make(direct_sum({su2_structure(), abelian_structure(2)}), H);
  const StructureReport b = bianchi_report(g);
  const double dH = b.value("lccc_hypothesis_dH"), pair = b.value("pair_symmetry");
  o.check(dH > 1e-3 && pair > 1e-3, "pair symmetry breaks when dH != 0");

  const auto q = standard_quaternion_triple(4);
  const StructureReport h = hkt_report(LieFrameGeometry::make(abelian_structure(4)), HypercomplexTriple{q.I1, q.I1, q.I3}, EpsilonOrientation(4, 1));
  o.check(!h.passed(), "non-anticommuting triple fails");

  const TopologyResult s4 = chern_topology(TopologyData::s4());
  o.check(!s4.admissible() && s4.verdict.find("no HKT fibration") != std::string::npos, "S4 rejected");
  o.detail << "|dH| " << dH << " pair witness " << pair << ", anticommutator " << h.value("anticommute") << ", S4 obstruction "
           << s4.obstruction;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Bianchi identities on 100 random geometries", 10.0, bianchi_suite},
      {2, "closed parallel torsion implies nabla H = 0 and Jacobi(H) = 0", 0.0, lccc_suite},
      {3, "SU(3) hypercomplex structure", 5.0, su3_suite},
      {4, "decomposition desk cases", 0.0, desk_cases},
      {5, "G2 and Spin(7) forms", 0.0, g2_spin7},
      {6, "SU(3) fibration curvature", 0.0, fibration},
      {7, "topological obstruction and Diophantine listing", 1.0, topology},
      {8, "dilaton monotone iteration", 60.0, dilaton},
      {9, "negative controls", 0.0, negative_controls},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs > c.time_limit) {
      o.pass = false;
      o.detail << " [over time limit " << c.time_limit << " s]";
    }
    if (!o.pass) ++failures;
    std::printf("%s %d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
