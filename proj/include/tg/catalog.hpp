#pragma once

// Named example geometries and the verify pipeline that runs every applicable check on a document.

#include <string>
#include <vector>

#include "tg/algebras.hpp"
#include "tg/fibration_topology.hpp"
#include "tg/io.hpp"
#include "tg/special_structures.hpp"
#include "tg/verifiers.hpp"

namespace tg {

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"su2-biinvariant", "su2su2",          "su2-plus-abelian3",
                                              "su3-hkt",         "flat-r4-quaternion", "g2-standard",
                                              "g2-su2-product",  "spin7-standard",  "su3-fibration"};
  return names;
}

inline std::string catalog_description(const std::string& name) {
  if (name == "su2-biinvariant") return "SU(2) with bi-invariant metric and torsion H = -c (flat Bismut connection)";
  if (name == "su2su2") return "R^2 x SU(2) x SU(2), HKT in the frame (R, su2, R, su2) with H = -c";
  if (name == "su2-plus-abelian3") return "su(2) + R^3 with torsion -c on the su(2) factor";
  if (name == "su3-hkt") return "SU(3) with H = -c and the left-invariant hypercomplex triple (I, J, IJ)";
  if (name == "flat-r4-quaternion") return "flat R^4 with the standard quaternion triple";
  if (name == "g2-standard") return "flat R^7 with the standard G2 3-form";
  if (name == "g2-su2-product") return "su(2) + R^4 with phi = e012 + sum e_r ^ omega_r, omega_r self-dual";
  if (name == "spin7-standard") return "flat R^8 with the Cayley 4-form built from the standard G2 form";
  if (name == "su3-fibration") return "SU(3) over the horizontal 4-frame with fiber u(1) + su(2)";
  throw InputError("unknown example \"" + name + "\"");
}

inline GeometryDocument catalog_entry(const std::string& name) {
  if (name == "su2-biinvariant") {
    return {LieFrameGeometry::make(su2_structure(), cartan_form(su2_structure(), -1.0), name)};
  }
  if (name == "su2su2") {
    const FrameTensor c = direct_sum({abelian_structure(1), su2_structure(), abelian_structure(1), su2_structure()});
    const FrameTensor H = direct_sum({FrameTensor::form(1, 3), cartan_form(su2_structure(), -1.0), FrameTensor::form(1, 3),
                                      cartan_form(su2_structure(), -1.0)});
    GeometryDocument doc{LieFrameGeometry::make(c, H, name)};
    doc.triple = standard_quaternion_triple(8);
    return doc;
  }
  if (name == "su2-plus-abelian3") {
    const FrameTensor c = direct_sum({su2_structure(), abelian_structure(3)});
    const FrameTensor H = direct_sum({cartan_form(su2_structure(), -1.0), FrameTensor::form(3, 3)});
    return {LieFrameGeometry::make(c, H, name)};
  }
  if (name == "su3-hkt" || name == "su3-fibration") {
    const Su3Data su3 = build_su3();
    GeometryDocument doc{LieFrameGeometry::make(su3.geom.c(), su3.geom.H(), name)};
    doc.triple = su3.triple;
    if (name == "su3-fibration") doc.fibration = "su3";
    return doc;
  }
  if (name == "flat-r4-quaternion") {
    GeometryDocument doc{LieFrameGeometry::make(abelian_structure(4), FrameTensor::form(4, 3), name)};
    doc.triple = standard_quaternion_triple(4);
    return doc;
  }
  if (name == "g2-standard") {
    GeometryDocument doc{LieFrameGeometry::make(abelian_structure(7), FrameTensor::form(7, 3), name)};
    doc.phi = build_g2_standard().phi;
    return doc;
  }
  if (name == "g2-su2-product") {
    const LieFrameGeometry g = su2_times_flat4();
    GeometryDocument doc{LieFrameGeometry::make(g.c(), g.H(), name)};
    doc.phi = build_g2_flat_product(false).phi;
    return doc;
  }
  if (name == "spin7-standard") {
    GeometryDocument doc{LieFrameGeometry::make(abelian_structure(8), FrameTensor::form(8, 3), name)};
    doc.Phi = build_spin7(build_g2_standard()).Phi;
    return doc;
  }
  throw InputError("unknown example \"" + name + "\"");
}

inline StructureReport g2_report(const LieFrameGeometry& geom, const FrameTensor& phi, const EpsilonOrientation& orient, double tol) {
  StructureReport rep;
  const Eigen::MatrixXd B = bryant_positivity({phi, orient});
  const Definiteness def = definiteness(B, tol);
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(B).eigenvalues().minCoeff();
  rep.add("positive", "B_phi positive definite (1 if not)", def == Definiteness::positive ? 0.0 : 1.0, 0.0);
  rep.add("min_eigenvalue", "lambda_min(B_phi)", lmin, 0.0, false);
  rep.add("metric", "B_phi - 1", (B - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff(), tol, false);
  rep.add("parallel", "nabla^ phi", parallel_residual(phi, geom, 1), tol);
  if (def == Definiteness::negative) rep.note("phi is negative in this orientation; the opposite orientation makes it positive");
  return rep;
}

inline StructureReport spin7_report(const LieFrameGeometry& geom, const FrameTensor& Phi, const EpsilonOrientation& orient, double tol) {
  StructureReport rep;
  const double ww = wedge_volume_coefficient(Phi, Phi, orient);
  rep.add("self_dual", "*Phi - Phi", (hodge_star(Phi, orient) - Phi).sup_norm(), tol);
  rep.add("phi_wedge_phi", "Phi^Phi / vol - 14", std::abs(ww - 14.0), tol);
  rep.add("parallel", "nabla^ Phi", parallel_residual(Phi, geom, 1), tol);
  return rep;
}

inline StructureReport fibration_report(double tol) {
  const Su3Fibration fib = build_su3_fibration();
  StructureReport rep;
  rep.add("frestrict", "F^r(I_s X, I_s Y) - sum_t B_s^{tr} F^t(X, Y)", frestrict_residual(fib.curvature, epsilon_representation(1.0), fib.base),
          tol);
  rep.add("wedge_trace", "h_{ab} F^a ^ F^b", wedge_trace(fib.curvature).sup_norm(), tol);
  rep.add("u1_anti_self_dual", "F^0_+", sd_asd_split(fib.curvature.F[0], fib.orient).first.sup_norm(), tol);
  rep.add("sd_curvature", "F^r_+ + (h/2) omega_r", sd_curvature_defect(fib.curvature, fib.base, 1.0, fib.orient), tol);
  return rep;
}

/// Every check applicable to the document: torsion-curvature identities always, then one block per structure key.
inline StructureReport run_verify(const GeometryDocument& doc, double tol = 1e-10) {
  const LieFrameGeometry& g = doc.geom;
  StructureReport rep = bianchi_report(g, tol);
  rep.title = "verify " + (doc.name().empty() ? std::string("geometry") : doc.name());
  const double flat = curvature(g, with_torsion(g, 1)).riemann.sup_norm();
  rep.add("bismut_curvature", "R^ (torsion +H)", flat, tol, false);
  if (flat <= tol) rep.note("the connection with torsion +H is flat");
  if (doc.J) rep.append(kt_report(g, *doc.J, doc.orient(), tol), "J.");
  if (doc.triple) rep.append(hkt_report(g, *doc.triple, doc.orient(), tol), "hkt.");
  if (doc.phi) rep.append(g2_report(g, *doc.phi, EpsilonOrientation(7, doc.orientation), tol), "g2.");
  if (doc.Phi) rep.append(spin7_report(g, *doc.Phi, EpsilonOrientation(8, doc.orientation), tol), "spin7.");
  if (doc.fibration) rep.append(fibration_report(tol), "fibration.");
  return rep;
}

}  // namespace tg
