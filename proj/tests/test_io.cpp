#include <gtest/gtest.h>

#include "tg/tg.hpp"

using namespace tg;

namespace {

// Exact componentwise equality; a stored -0.0 is written as an absent entry and reads back as +0.0.
bool bit_equal(const FrameTensor& a, const FrameTensor& b) {
  if (a.dim() != b.dim() || a.rank() != b.rank()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a.data()[i] == b.data()[i])) return false;
  return true;
}

GeometryDocument reparse(const GeometryDocument& doc) { return geometry_from_json(json::parse(geometry_to_json(doc).dump())); }

json su2_json() {
  return json::parse(R"({"name": "su2", "dim": 3, "c": [[0, 1, 2, 1.0], [1, 2, 0, 1.0], [2, 0, 1, 1.0]], "H": [[0, 1, 2, -1.0]]})");
}

}  // namespace

TEST(GeometryJson, CatalogRoundTripIsBitExact) {
  for (const auto& name : catalog_names()) {
    const GeometryDocument doc = catalog_entry(name);
    const GeometryDocument back = reparse(doc);
    EXPECT_TRUE(bit_equal(doc.geom.c(), back.geom.c())) << name;
    EXPECT_TRUE(bit_equal(doc.geom.H(), back.geom.H())) << name;
    EXPECT_EQ(back.name(), name);
    EXPECT_EQ(doc.triple.has_value(), back.triple.has_value());
    if (doc.triple) {
      for (int r = 0; r < 3; ++r) EXPECT_EQ(((*doc.triple)[r].J - (*back.triple)[r].J).cwiseAbs().maxCoeff(), 0.0);
    }
    if (doc.phi) {
      EXPECT_TRUE(bit_equal(*doc.phi, *back.phi));
    }
    if (doc.Phi) {
      EXPECT_TRUE(bit_equal(*doc.Phi, *back.Phi));
    }
    EXPECT_EQ(doc.fibration, back.fibration);
    EXPECT_EQ(geometry_to_json(back).dump(), geometry_to_json(doc).dump());
  }
}

TEST(GeometryJsonProperty, RandomGeometriesRoundTripBitExact) {
  GeometrySampler s(41);
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + t % 4;
    GeometryDocument doc(s.random_geometry(n));
    if (n % 2 == 0) doc.J = standard_complex_structure(n);
    doc.orientation = t % 3 == 0 ? -1 : 1;
    const GeometryDocument back = reparse(doc);
    EXPECT_TRUE(bit_equal(doc.geom.c(), back.geom.c()));
    EXPECT_TRUE(bit_equal(doc.geom.H(), back.geom.H()));
    EXPECT_EQ(back.orientation, doc.orientation);
    EXPECT_EQ(back.J.has_value(), n % 2 == 0);
  }
}

TEST(GeometryJson, NestedAndSparseAgree) {
  const GeometryDocument sparse = geometry_from_json(su2_json());
  json nested = su2_json();
  json c = json::array();
  for (int a = 0; a < 3; ++a) {
    json plane = json::array();
    for (int b = 0; b < 3; ++b) {
      json row = json::array();
      for (int d = 0; d < 3; ++d) row.push_back(su2_structure()(a, b, d));
      plane.push_back(row);
    }
    c.push_back(plane);
  }
  nested["c"] = c;
  const GeometryDocument from_nested = geometry_from_json(nested);
  EXPECT_TRUE(bit_equal(sparse.geom.c(), from_nested.geom.c()));
  EXPECT_TRUE(bit_equal(sparse.geom.c(), su2_structure()));
  EXPECT_EQ(sparse.geom.H()(0, 1, 2), -1.0);
  EXPECT_EQ(sparse.geom.H()(2, 1, 0), 1.0);
}

TEST(GeometryJson, UnsortedEntriesCarryPermutationSign) {
  json j = su2_json();
  j["H"] = json::parse("[[2, 1, 0, 1.0]]");
  j["c"] = json::parse("[[0, 2, 1, -1.0], [1, 2, 0, 1.0], [2, 1, 0, -1.0]]");
  const GeometryDocument doc = geometry_from_json(j);
  EXPECT_EQ(doc.geom.H()(0, 1, 2), -1.0);
  EXPECT_TRUE(bit_equal(doc.geom.c(), su2_structure()));
  // written back in canonical order
  EXPECT_EQ(geometry_to_json(doc)["H"], json::parse("[[0, 1, 2, -1.0]]"));
}

TEST(GeometryJson, MalformedInputRejected) {
  auto with = [](const char* key, const json& v) {
    json j = su2_json();
    j[key] = v;
    return j;
  };
  auto without = [](const char* key) {
    json j = su2_json();
    j.erase(key);
    return j;
  };
  EXPECT_THROW(geometry_from_json(json::array()), InputError);
  EXPECT_THROW(geometry_from_json(without("dim")), InputError);
  EXPECT_THROW(geometry_from_json(without("c")), InputError);
  EXPECT_THROW(geometry_from_json(with("dim", 0)), InputError);
  EXPECT_THROW(geometry_from_json(with("dim", 2.5)), InputError);
  EXPECT_THROW(geometry_from_json(with("c", json::parse("[[0, 1, 3, 1.0]]"))), InputError);
  EXPECT_THROW(geometry_from_json(with("c", json::parse("[[0, 1, 1, 1.0]]"))), InputError);
  EXPECT_THROW(geometry_from_json(with("c", json::parse("[[0, 1, 2, 1.0], [0, 2, 1, 1.0]]"))), InputError);
  EXPECT_THROW(geometry_from_json(with("c", json::parse("[[0, 1, 2, \"x\"]]"))), InputError);
  EXPECT_THROW(geometry_from_json(with("c", json::parse("[[0, 1, 2]]"))), InputError);
  EXPECT_THROW(geometry_from_json(with("H", json::parse("[[0, 1, 1, 1.0]]"))), InputError);
  EXPECT_THROW(geometry_from_json(with("H", json::parse("[[0, 1, 2, 1.0], [2, 1, 0, 1.0]]"))), InputError);
  EXPECT_THROW(geometry_from_json(with("orientation", 2)), InputError);
  EXPECT_THROW(geometry_from_json(with("phi", json::array())), InputError);
  EXPECT_THROW(geometry_from_json(with("fibration", "hopf")), InputError);
  EXPECT_THROW(geometry_from_json(with("I1", json::array())), InputError);
  // [e0, e1] = e2 and [e2, e3] = e0 violate Jacobi on (e0, e1, e3)
  EXPECT_THROW(geometry_from_json(json::parse(R"({"dim": 4, "c": [[2, 0, 1, 1.0], [0, 2, 3, 1.0]]})")), InputError);
}

TEST(GeometryJson, TripleAndFormKeys) {
  json j = json::parse(R"({"dim": 4, "c": [], "H": []})");
  GeometryDocument doc = catalog_entry("flat-r4-quaternion");
  const json full = geometry_to_json(doc);
  j["I1"] = full["I1"];
  j["I2"] = full["I2"];
  j["I3"] = full["I3"];
  const GeometryDocument back = geometry_from_json(j);
  ASSERT_TRUE(back.triple.has_value());
  EXPECT_EQ(back.triple->product_defect(), 0.0);
  j.erase("I3");
  EXPECT_THROW(geometry_from_json(j), InputError);
  // J entries that are not a complex structure
  j["J"] = json::parse("[[0, 1, 1.0], [1, 0, 1.0], [2, 3, 1.0], [3, 2, 1.0]]");
  j.erase("I1");
  j.erase("I2");
  EXPECT_THROW(geometry_from_json(j), InputError);
}

TEST(TopologyJson, ParseAndErrors) {
  const json j = json::parse(R"({"k": 1, "n": [1], "chi": 3, "tau": -1})");
  const TopologyData t = topology_from_json(j);
  EXPECT_EQ(t.k, 1);
  EXPECT_EQ(topology_to_json(t), j);
  EXPECT_EQ(topology_mode_from_json(j), TopologyMode::principal);
  const TopologyResult r = chern_topology(t);
  const json out = topology_result_to_json(r);
  EXPECT_EQ(out["obstruction"], 0);
  EXPECT_EQ(out["c2E"], -1.0);
  EXPECT_EQ(out["admissible"], true);
  EXPECT_THROW(topology_from_json(json::parse(R"({"k": 1, "n": [1], "chi": 3})")), InputError);
  EXPECT_THROW(topology_from_json(json::parse(R"({"k": 1, "n": [0.5], "chi": 3, "tau": -1})")), InputError);
  EXPECT_THROW(topology_from_json(json::parse(R"({"k": 2, "n": [1], "chi": 4, "tau": -2})")), InputError);
  EXPECT_THROW(topology_mode_from_json(json::parse(R"({"mode": "so3"})")), InputError);
  EXPECT_EQ(topology_mode_from_json(json::parse(R"({"mode": "u2"})")), TopologyMode::u2);
  EXPECT_EQ(diophantine_to_json(enumerate_diophantine(12)), json::parse(R"([{"k": 1, "abs_n": [1]}, {"k": 4, "abs_n": [0, 0, 0, 0]}])"));
}

TEST(DilatonJson, ParseRoundTripAndErrors) {
  const json j = json::parse(R"({"grid": [8, 8], "spacing": 0.25, "w": "constant-4", "tol": 1e-9, "lambda": "auto", "max_iter": 500})");
  const DilatonProblem p = dilaton_from_json(j);
  EXPECT_FALSE(p.config.lambda.has_value());
  EXPECT_EQ(p.config.max_iter, 500);
  EXPECT_EQ(dilaton_problem_to_json(p), j);
  const DiscreteDomain d = p.domain();
  EXPECT_EQ(p.field(d), Eigen::VectorXd::Constant(64, 4.0));
  const DilatonSolution sol = monotone_iterate(d, p.field(d), p.config);
  const json out = dilaton_solution_to_json(sol);
  EXPECT_EQ(out["u"].size(), 64u);
  EXPECT_TRUE(out["trace"]["monotone"].get<bool>());
  EXPECT_TRUE(out["trace"]["converged"].get<bool>());
  for (const auto& v : out["u"]) EXPECT_NEAR(v.get<double>(), 2.0, 1e-8);

  const DilatonProblem q = dilaton_from_json(json::parse(R"({"grid": [3, 3], "spacing": 1, "w": [1, 2, 3, 4, 5, 6, 7, 8, 9], "lambda": 10})"));
  ASSERT_TRUE(q.config.lambda.has_value());
  EXPECT_EQ(*q.config.lambda, 10.0);
  EXPECT_EQ(dilaton_from_json(dilaton_problem_to_json(q)).w, q.w);
  const DilatonProblem short_w = dilaton_from_json(json::parse(R"({"grid": [3, 3], "spacing": 1, "w": [1, 2]})"));
  EXPECT_THROW(short_w.field(short_w.domain()), InputError);
  EXPECT_THROW(dilaton_from_json(json::parse(R"({"grid": [3, 3], "spacing": 1, "w": 4})")), InputError);
  EXPECT_THROW(dilaton_from_json(json::parse(R"({"grid": [3, 3], "spacing": 1, "w": "constant-4", "lambda": "big"})")), InputError);
  EXPECT_THROW(dilaton_from_json(json::parse(R"({"grid": [], "spacing": 1, "w": "constant-4"})")), InputError);
  const DilatonProblem unknown = dilaton_from_json(json::parse(R"({"grid": [4, 4], "spacing": 1, "w": "nope"})"));
  EXPECT_THROW(unknown.field(unknown.domain()), InputError);
}

TEST(ReportJson, RowsAndVerdicts) {
  StructureReport r;
  r.title = "t";
  r.add("a", "x = 0", 1e-12, 1e-10);
  r.add("b", "y = 0", 1.0, 1e-10, false);
  r.note("n");
  json j = report_to_json(r);
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["rows"][1]["asserted"], false);
  EXPECT_EQ(j["rows"][0]["equation"], "x = 0");
  r.add("c", "z = 0", 1.0, 1e-10);
  EXPECT_FALSE(report_to_json(r)["passed"].get<bool>());

  const json d = decomposition_to_json(decompose(catalog_entry("su2-plus-abelian3").geom));
  EXPECT_EQ(d["kernel_dim"], 3);
  EXPECT_EQ(d["blocks"].size(), 1u);
  EXPECT_EQ(d["blocks"][0]["label"], "su(2)");
}

TEST(Catalog, EveryEntryVerifies) {
  for (const auto& name : catalog_names()) {
    const StructureReport r = run_verify(catalog_entry(name));
    EXPECT_TRUE(r.passed()) << name;
    for (const auto& row : r.rows) EXPECT_FALSE(row.equation.empty()) << name << " " << row.name;
    EXPECT_FALSE(catalog_description(name).empty());
  }
  EXPECT_EQ(catalog_names().size(), 9u);
  EXPECT_THROW(catalog_entry("su4"), InputError);
}

TEST(Catalog, ExpectedRowsPresent) {
  const StructureReport su2 = run_verify(catalog_entry("su2-biinvariant"));
  EXPECT_EQ(su2.value("bismut_curvature"), 0.0);
  EXPECT_NE(std::find(su2.notes.begin(), su2.notes.end(), "the connection with torsion +H is flat"), su2.notes.end());
  const StructureReport su3 = run_verify(catalog_entry("su3-hkt"));
  EXPECT_NE(su3.find("hkt.lee_13"), nullptr);
  EXPECT_EQ(su3.find("fibration.frestrict"), nullptr);
  const StructureReport fib = run_verify(catalog_entry("su3-fibration"));
  EXPECT_NE(fib.find("fibration.wedge_trace"), nullptr);
  EXPECT_NE(run_verify(catalog_entry("g2-su2-product")).find("g2.parallel"), nullptr);
  EXPECT_NE(run_verify(catalog_entry("spin7-standard")).find("spin7.self_dual"), nullptr);
}

TEST(Catalog, DecomposeVerdicts) {
  EXPECT_NE(decompose(catalog_entry("su2-plus-abelian3").geom).verdict.find("kernel 3, blocks [su(2)]"), std::string::npos);
  EXPECT_NE(decompose(catalog_entry("su3-hkt").geom).verdict.find("kernel 0, blocks [su(3)]"), std::string::npos);
  EXPECT_NE(decompose(catalog_entry("su2su2").geom).verdict.find("kernel 2, blocks [su(2), su(2)]"), std::string::npos);
}

TEST(Verify, FailuresSurfaceInReport) {
  // wrong orientation for the self-dual product form: Bryant form no longer positive
  GeometryDocument doc = catalog_entry("g2-su2-product");
  doc.orientation = -1;
  const StructureReport r = run_verify(doc);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.value("g2.positive"), 1.0);
  // torsion +c instead of -c on su(3): the triple is no longer parallel
  const GeometryDocument su3 = catalog_entry("su3-hkt");
  GeometryDocument flipped(LieFrameGeometry::make(su3.geom.c(), -1.0 * su3.geom.H(), "su3 flipped"));
  flipped.triple = su3.triple;
  EXPECT_FALSE(run_verify(flipped).passed());
}

TEST(Verify, NonClosedTorsionWitness) {
  FrameTensor H = FrameTensor::form(5, 3);
  H.add_form_component(std::vector<int>{0, 3, 4}, 1.0);
  const GeometryDocument doc(LieFrameGeometry::make(direct_sum({su2_structure(), abelian_structure(2)}), H));
  const StructureReport r = run_verify(doc);
  EXPECT_GT(r.value("lccc_hypothesis_dH"), 0.5);
  EXPECT_GT(r.value("pair_symmetry"), 0.1);
  EXPECT_LT(r.value("bianchi_first"), 1e-12);
  RecordProperty("pair_symmetry_witness", std::to_string(r.value("pair_symmetry")));
}
