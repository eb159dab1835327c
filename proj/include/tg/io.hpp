#pragma once

// JSON encoding of geometries, structures, topology data, dilaton problems and reports.

#include <Eigen/Dense>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tg/decomposition.hpp"
#include "tg/dilaton.hpp"
#include "tg/fibration_topology.hpp"
#include "tg/frame_tensor.hpp"
#include "tg/geometry.hpp"
#include "tg/report.hpp"
#include "tg/special_structures.hpp"

namespace tg {

using json = nlohmann::json;

/// A geometry plus whatever structures ride on it.
struct GeometryDocument {
  LieFrameGeometry geom;
  int orientation = 1;
  std::optional<AlmostComplexStructure> J;
  std::optional<HypercomplexTriple> triple;
  std::optional<FrameTensor> phi;  // G2 3-form, dim 7
  std::optional<FrameTensor> Phi;  // Cayley 4-form, dim 8
  std::optional<std::string> fibration;

  GeometryDocument(LieFrameGeometry g) : geom(std::move(g)) {}

  std::string name() const { return geom.name(); }
  EpsilonOrientation orient() const { return {geom.dim(), orientation}; }
};

namespace detail {

inline const json& require_key(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

inline int index_value(const json& v, int dim) {
  if (!v.is_number_integer()) throw InputError("frame index must be an integer");
  const long long i = v.get<long long>();
  if (i < 0 || i >= dim) throw InputError("frame index " + std::to_string(i) + " out of range");
  return static_cast<int>(i);
}

inline double number_value(const json& v) {
  if (!v.is_number()) throw InputError("component value must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError("component value must be finite");
  return x;
}

/// [[i1..ip, v], ...] with increasing indices; unsorted entries are reordered with the permutation sign.
inline FrameTensor form_from_json(const json& j, int dim, int degree) {
  if (!j.is_array()) throw InputError("sparse form list must be an array");
  FrameTensor f = FrameTensor::form(dim, degree);
  std::set<std::vector<int>> seen;
  for (const auto& e : j) {
    if (!e.is_array() || static_cast<int>(e.size()) != degree + 1) throw InputError("sparse form entry has the wrong length");
    std::vector<int> idx;
    for (int k = 0; k < degree; ++k) idx.push_back(index_value(e[std::size_t(k)], dim));
    const double v = number_value(e[std::size_t(degree)]);
    std::vector<int> sorted = idx;
    const int s = sort_sign(sorted);
    if (s == 0) throw InputError("sparse form entry repeats an index");
    if (!seen.insert(sorted).second) throw InputError("duplicate sparse form entry");
    f.add_form_component(sorted, s * v);
  }
  return f;
}

inline json form_to_json(const FrameTensor& f) {
  json out = json::array();
  for (const auto& s : increasing_subsets(f.dim(), f.degree())) {
    const double v = f(s);
    if (v == 0.0) continue;
    json e = json::array();
    for (int i : s) e.push_back(i);
    e.push_back(v);
    out.push_back(e);
  }
  return out;
}

/// Nested dim x dim x dim array, or sparse [a, b, c, v] entries antisymmetric in (b, c).
inline FrameTensor structure_from_json(const json& j, int dim) {
  FrameTensor c(dim, 3);
  if (!j.is_array()) throw InputError("structure constants must be an array");
  const bool nested = !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array();
  if (nested) {
    if (static_cast<int>(j.size()) != dim) throw InputError("nested structure constants have the wrong shape");
    for (int a = 0; a < dim; ++a) {
      if (!j[std::size_t(a)].is_array() || static_cast<int>(j[std::size_t(a)].size()) != dim) throw InputError("nested structure constants have the wrong shape");
      for (int b = 0; b < dim; ++b) {
        const json& row = j[std::size_t(a)][std::size_t(b)];
        if (!row.is_array() || static_cast<int>(row.size()) != dim) throw InputError("nested structure constants have the wrong shape");
        for (int d = 0; d < dim; ++d) c(a, b, d) = number_value(row[std::size_t(d)]);
      }
    }
    return c;
  }
  std::set<std::array<int, 3>> seen;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 4) throw InputError("structure constant entry must be [a, b, c, value]");
    const int a = index_value(e[0], dim), b = index_value(e[1], dim), d = index_value(e[2], dim);
    const double v = number_value(e[3]);
    if (b == d) throw InputError("structure constant entry with equal lower indices");
    const std::array<int, 3> key{a, std::min(b, d), std::max(b, d)};
    if (!seen.insert(key).second) throw InputError("duplicate structure constant entry");
    c(a, b, d) = v;
    c(a, d, b) = -v;
  }
  return c;
}

inline json structure_to_json(const FrameTensor& c) {
  json out = json::array();
  const int n = c.dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = b + 1; d < n; ++d) {
        const double v = c(a, b, d);
        if (v != 0.0) out.push_back(json::array({a, b, d, v}));
      }
  return out;
}

inline Eigen::MatrixXd matrix_from_json(const json& j, int dim) {
  if (!j.is_array()) throw InputError("matrix entries must be an array");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3) throw InputError("matrix entry must be [row, col, value]");
    M(index_value(e[0], dim), index_value(e[1], dim)) = number_value(e[2]);
  }
  return M;
}

inline json matrix_to_json(const Eigen::MatrixXd& M) {
  json out = json::array();
  for (int a = 0; a < M.rows(); ++a)
    for (int b = 0; b < M.cols(); ++b)
      if (M(a, b) != 0.0) out.push_back(json::array({a, b, M(a, b)}));
  return out;
}

inline json vector_to_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

}  // namespace detail

inline GeometryDocument geometry_from_json(const json& j) {
  if (!j.is_object()) throw InputError("geometry document must be a JSON object");
  const json& jd = detail::require_key(j, "dim");
  if (!jd.is_number_integer()) throw InputError("dim must be an integer");
  const int dim = jd.get<int>();
  if (dim < 1 || dim > kMaxDim) throw InputError("dim out of range");
  const FrameTensor c = detail::structure_from_json(detail::require_key(j, "c"), dim);
  const FrameTensor H = j.contains("H") ? detail::form_from_json(j.at("H"), dim, 3) : FrameTensor::form(dim, 3);
  const std::string name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : std::string{};
  GeometryDocument doc{LieFrameGeometry::make(c, H, name)};
  if (j.contains("orientation")) {
    const json& o = j.at("orientation");
    if (!o.is_number_integer() || (o.get<int>() != 1 && o.get<int>() != -1)) throw InputError("orientation must be 1 or -1");
    doc.orientation = o.get<int>();
  }
  if (j.contains("J")) doc.J = AlmostComplexStructure::make(detail::matrix_from_json(j.at("J"), dim));
  const bool any_triple = j.contains("I1") || j.contains("I2") || j.contains("I3");
  if (any_triple) {
    if (!(j.contains("I1") && j.contains("I2") && j.contains("I3"))) throw InputError("I1, I2 and I3 must be given together");
    doc.triple = HypercomplexTriple{AlmostComplexStructure::make(detail::matrix_from_json(j.at("I1"), dim)),
                                    AlmostComplexStructure::make(detail::matrix_from_json(j.at("I2"), dim)),
                                    AlmostComplexStructure::make(detail::matrix_from_json(j.at("I3"), dim))};
  }
  if (j.contains("phi")) {
    if (dim != 7) throw InputError("phi requires dim 7");
    doc.phi = detail::form_from_json(j.at("phi"), 7, 3);
  }
  if (j.contains("Phi")) {
    if (dim != 8) throw InputError("Phi requires dim 8");
    doc.Phi = detail::form_from_json(j.at("Phi"), 8, 4);
  }
  if (j.contains("fibration")) {
    if (!j.at("fibration").is_string() || j.at("fibration").get<std::string>() != "su3") throw InputError("fibration must be \"su3\"");
    doc.fibration = "su3";
  }
  return doc;
}

inline json geometry_to_json(const GeometryDocument& doc) {
  json j;
  j["name"] = doc.geom.name();
  j["dim"] = doc.geom.dim();
  j["c"] = detail::structure_to_json(doc.geom.c());
  j["H"] = detail::form_to_json(doc.geom.H());
  if (doc.orientation != 1) j["orientation"] = doc.orientation;
  if (doc.J) j["J"] = detail::matrix_to_json(doc.J->J);
  if (doc.triple) {
    j["I1"] = detail::matrix_to_json(doc.triple->I1.J);
    j["I2"] = detail::matrix_to_json(doc.triple->I2.J);
    j["I3"] = detail::matrix_to_json(doc.triple->I3.J);
  }
  if (doc.phi) j["phi"] = detail::form_to_json(*doc.phi);
  if (doc.Phi) j["Phi"] = detail::form_to_json(*doc.Phi);
  if (doc.fibration) j["fibration"] = *doc.fibration;
  return j;
}

inline json report_to_json(const StructureReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"name", row.name}, {"equation", row.equation}, {"value", row.value}, {"tolerance", row.tolerance},
                    {"asserted", row.asserted}, {"passed", row.passed()}});
  return {{"title", r.title}, {"hypotheses_met", r.hypotheses_met}, {"passed", r.passed()}, {"rows", rows}, {"notes", r.notes}};
}

inline json decomposition_to_json(const DecompositionResult& d) {
  json clusters = json::array();
  for (const auto& c : d.clusters) clusters.push_back({{"eigenvalue", c.eigenvalue}, {"multiplicity", c.multiplicity}, {"kernel", c.kernel}});
  json blocks = json::array();
  for (const auto& b : d.blocks)
    blocks.push_back({{"label", b.label}, {"dim", b.basis.cols()}, {"h_eigenvalue", b.h_eigenvalue}, {"jacobi", b.jacobi},
                      {"killing_defect", b.killing_defect}});
  return {{"hypotheses_met", d.hypotheses_met}, {"kernel_dim", d.kernel_dim}, {"clusters", clusters}, {"blocks", blocks},
          {"verdict", d.verdict}, {"report", report_to_json(d.report)}};
}

inline TopologyData topology_from_json(const json& j) {
  if (!j.is_object()) throw InputError("topology document must be a JSON object");
  TopologyData t;
  auto integer = [&](const char* key) {
    const json& v = detail::require_key(j, key);
    if (!v.is_number_integer()) throw InputError(std::string(key) + " must be an integer");
    return v.get<long long>();
  };
  t.k = static_cast<int>(integer("k"));
  t.chi = integer("chi");
  t.tau = integer("tau");
  const json& n = detail::require_key(j, "n");
  if (!n.is_array()) throw InputError("n must be an array");
  for (const auto& v : n) {
    if (!v.is_number_integer()) throw InputError("n entries must be integers");
    t.n.push_back(v.get<long long>());
  }
  t.validate();
  return t;
}

inline TopologyMode topology_mode_from_json(const json& j) {
  if (!j.contains("mode")) return TopologyMode::principal;
  const json& m = j.at("mode");
  if (m == "principal") return TopologyMode::principal;
  if (m == "u2") return TopologyMode::u2;
  throw InputError("mode must be \"principal\" or \"u2\"");
}

inline json topology_to_json(const TopologyData& t) { return {{"k", t.k}, {"n", t.n}, {"chi", t.chi}, {"tau", t.tau}}; }

inline json topology_result_to_json(const TopologyResult& r) {
  return {{"c1_sq", r.c1_sq},
          {"p1_adj", r.p1_adj},
          {"obstruction", r.obstruction},
          {"c2E", r.c2E()},
          {"obstruction_vanishes", r.obstruction_vanishes},
          {"c1_sq_nonpositive", r.c1_sq_nonpositive},
          {"p1_divisible_by_3", r.p1_divisible_by_3},
          {"c2E_integral", r.c2E_integral},
          {"admissible", r.admissible()},
          {"verdict", r.verdict}};
}

inline json diophantine_to_json(const std::vector<DiophantineSolution>& sols) {
  json out = json::array();
  for (const auto& s : sols) out.push_back({{"k", s.k}, {"abs_n", s.n}});
  return out;
}

struct DilatonProblem {
  std::vector<int> grid;
  double spacing = 1.0;
  std::optional<std::string> w_preset;
  Eigen::VectorXd w;  // used when no preset is named
  SolverConfig config;

  DiscreteDomain domain() const { return build_periodic_grid(grid, spacing); }

  Eigen::VectorXd field(const DiscreteDomain& d) const {
    if (w_preset) return tg::w_preset(*w_preset, d);
    if (w.size() != d.node_count()) throw InputError("w has " + std::to_string(w.size()) + " entries for " + std::to_string(d.node_count()) + " nodes");
    return w;
  }
};

inline DilatonProblem dilaton_from_json(const json& j) {
  if (!j.is_object()) throw InputError("dilaton problem must be a JSON object");
  DilatonProblem p;
  const json& g = detail::require_key(j, "grid");
  if (!g.is_array() || g.empty()) throw InputError("grid must be a non-empty array");
  for (const auto& v : g) {
    if (!v.is_number_integer()) throw InputError("grid sizes must be integers");
    p.grid.push_back(v.get<int>());
  }
  p.spacing = detail::number_value(detail::require_key(j, "spacing"));
  const json& w = detail::require_key(j, "w");
  if (w.is_string()) {
    p.w_preset = w.get<std::string>();
  } else if (w.is_array()) {
    p.w.resize(static_cast<Eigen::Index>(w.size()));
    for (std::size_t i = 0; i < w.size(); ++i) p.w(Eigen::Index(i)) = detail::number_value(w[i]);
  } else {
    throw InputError("w must be a preset name or an array");
  }
  if (j.contains("tol")) p.config.tol = detail::number_value(j.at("tol"));
  if (j.contains("lambda")) {
    const json& l = j.at("lambda");
    if (l.is_string()) {
      if (l.get<std::string>() != "auto") throw InputError("lambda must be a number or \"auto\"");
    } else {
      p.config.lambda = detail::number_value(l);
    }
  }
  if (j.contains("max_iter")) {
    if (!j.at("max_iter").is_number_integer()) throw InputError("max_iter must be an integer");
    p.config.max_iter = j.at("max_iter").get<int>();
  }
  return p;
}

inline json dilaton_problem_to_json(const DilatonProblem& p) {
  json j{{"grid", p.grid}, {"spacing", p.spacing}, {"tol", p.config.tol}, {"max_iter", p.config.max_iter}};
  if (p.w_preset) {
    j["w"] = *p.w_preset;
  } else {
    j["w"] = detail::vector_to_json(p.w);
  }
  if (p.config.lambda) {
    j["lambda"] = *p.config.lambda;
  } else {
    j["lambda"] = "auto";
  }
  return j;
}

inline json dilaton_solution_to_json(const DilatonSolution& s) {
  const IterationTrace& t = s.trace;
  bool monotone = true, bounded = true;
  for (const auto& st : t.steps) {
    monotone = monotone && st.monotone_ok;
    bounded = bounded && st.bounds_ok;
  }
  json steps = json::array();
  for (const auto& st : t.steps)
    steps.push_back({{"step_sup", st.step_sup}, {"u_min", st.u_min}, {"u_max", st.u_max}, {"residual_sup", st.residual_sup}});
  return {{"u", detail::vector_to_json(s.u)},
          {"residual_sup", t.final_residual},
          {"trace",
           {{"a", t.a},
            {"b", t.b},
            {"lambda", t.lambda},
            {"iterations", t.iterations()},
            {"converged", t.converged},
            {"monotone", monotone},
            {"bounded", bounded},
            {"residual_bound", t.residual_bound},
            {"direct_solver", t.direct_solver},
            {"steps", steps}}}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

}  // namespace tg
