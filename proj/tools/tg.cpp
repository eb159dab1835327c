#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "tg/tg.hpp"

namespace {

constexpr const char* kArtifact = "tg";
constexpr const char* kVersion = "1.0.0";

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string example_name;
  double tol = 1e-10;
  std::string output_path;
  std::string format = "json";
  int k_max = 12;
};

tg::json envelope(const RunConfig& cfg, const std::string& source, bool passed) {
  return {{"artifact", kArtifact}, {"version", kVersion}, {"command", cfg.command}, {"source", source}, {"tolerance", cfg.tol},
          {"passed", passed}};
}

std::string format_value(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

std::string report_text(const tg::StructureReport& r) {
  std::ostringstream os;
  os << r.title << "\n";
  if (!r.hypotheses_met) os << "  hypotheses not met\n";
  for (const auto& row : r.rows) {
    const char* status = !row.asserted ? "info" : (row.passed() ? "pass" : "FAIL");
    os << "  " << std::left << std::setw(32) << row.name << std::setw(11) << format_value(row.value) << " tol " << std::setw(10)
       << format_value(row.tolerance) << " " << std::setw(5) << status << row.equation << "\n";
  }
  for (const auto& n : r.notes) os << "  note: " << n << "\n";
  os << (r.passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path);
  if (!out) throw tg::InputError("cannot write " + cfg.output_path);
  out << text;
}

void emit_json(const RunConfig& cfg, const tg::json& j) { emit(cfg, j.dump(2) + "\n"); }

tg::GeometryDocument load_geometry(const RunConfig& cfg, std::string& source) {
  if (cfg.input_path.empty() == cfg.example_name.empty()) throw tg::InputError("give exactly one of --input or --example");
  if (!cfg.example_name.empty()) {
    source = "example:" + cfg.example_name;
    return tg::catalog_entry(cfg.example_name);
  }
  source = cfg.input_path;
  return tg::geometry_from_json(tg::read_json_file(cfg.input_path));
}

int run_verify(const RunConfig& cfg) {
  std::string source;
  const tg::GeometryDocument doc = load_geometry(cfg, source);
  const tg::StructureReport rep = tg::run_verify(doc, cfg.tol);
  if (cfg.format == "text") {
    emit(cfg, report_text(rep));
  } else {
    tg::json j = envelope(cfg, source, rep.passed());
    j["report"] = tg::report_to_json(rep);
    emit_json(cfg, j);
  }
  return rep.passed() ? 0 : 1;
}

int run_decompose(const RunConfig& cfg) {
  std::string source;
  const tg::GeometryDocument doc = load_geometry(cfg, source);
  tg::Tolerances tol;
  tol.residual = cfg.tol;
  const tg::DecompositionResult d = tg::decompose(doc.geom, tol);
  const bool ok = d.hypotheses_met && d.report.passed();
  if (cfg.format == "text") {
    emit(cfg, report_text(d.report) + "verdict: " + d.verdict + "\n");
  } else {
    tg::json j = envelope(cfg, source, ok);
    j["decomposition"] = tg::decomposition_to_json(d);
    emit_json(cfg, j);
  }
  return ok ? 0 : 1;
}

int run_topology(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw tg::InputError("topology needs --input");
  const tg::json in = tg::read_json_file(cfg.input_path);
  const tg::TopologyData top = tg::topology_from_json(in);
  const tg::TopologyMode mode = tg::topology_mode_from_json(in);
  const tg::TopologyResult r = tg::chern_topology(top, mode);
  const auto sols = tg::enumerate_diophantine(cfg.k_max);
  if (cfg.format == "text") {
    std::ostringstream os;
    os << "k " << top.k << "  chi " << top.chi << "  tau " << top.tau << "\n"
       << "c1^2 " << r.c1_sq << "  p1 " << r.p1_adj << "  obstruction " << r.obstruction << "  c2(E) " << r.c2E() << "\n"
       << "verdict: " << r.verdict << "\n"
       << "solutions with k <= " << cfg.k_max << ":\n";
    for (const auto& s : sols) {
      os << "  k " << s.k << "  |n|";
      for (int v : s.n) os << " " << v;
      os << "\n";
    }
    emit(cfg, os.str());
  } else {
    tg::json j = envelope(cfg, cfg.input_path, r.admissible());
    j["input"] = tg::topology_to_json(top);
    j["mode"] = mode == tg::TopologyMode::u2 ? "u2" : "principal";
    j["result"] = tg::topology_result_to_json(r);
    j["diophantine"] = {{"k_max", cfg.k_max}, {"solutions", tg::diophantine_to_json(sols)}};
    emit_json(cfg, j);
  }
  return r.admissible() ? 0 : 1;
}

int run_dilaton(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw tg::InputError("dilaton needs --input");
  const tg::DilatonProblem p = tg::dilaton_from_json(tg::read_json_file(cfg.input_path));
  const tg::DiscreteDomain d = p.domain();
  const Eigen::VectorXd w = p.field(d);
  const tg::DilatonSolution sol = tg::monotone_iterate(d, w, p.config);
  if (cfg.format == "text") {
    const tg::IterationTrace& t = sol.trace;
    std::ostringstream os;
    os << "nodes " << d.node_count() << "  a " << t.a << "  b " << t.b << "  lambda " << t.lambda << "\n"
       << "iterations " << t.iterations() << "  converged " << (t.converged ? "yes" : "no") << "\n"
       << "residual " << format_value(t.final_residual) << "  bound " << format_value(t.residual_bound) << "\n"
       << "u in [" << sol.u.minCoeff() << ", " << sol.u.maxCoeff() << "]\n";
    emit(cfg, os.str());
  } else {
    tg::json j = envelope(cfg, cfg.input_path, sol.trace.converged);
    j["problem"] = tg::dilaton_problem_to_json(p);
    j["solution"] = tg::dilaton_solution_to_json(sol);
    emit_json(cfg, j);
  }
  return sol.trace.converged ? 0 : 1;
}

int run_catalog(const RunConfig& cfg) {
  if (cfg.format == "text") {
    std::ostringstream os;
    for (const auto& n : tg::catalog_names()) os << std::left << std::setw(20) << n << tg::catalog_description(n) << "\n";
    emit(cfg, os.str());
  } else {
    tg::json list = tg::json::array();
    for (const auto& n : tg::catalog_names()) list.push_back({{"name", n}, {"description", tg::catalog_description(n)}});
    tg::json j = envelope(cfg, "catalog", true);
    j["examples"] = list;
    emit_json(cfg, j);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Torsion geometry checks on Lie frames"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto common = [&](CLI::App* sub, bool geometry) {
    if (geometry) {
      auto* in = sub->add_option("--input", cfg.input_path, "geometry JSON file");
      auto* ex = sub->add_option("--example", cfg.example_name, "catalog entry name");
      in->excludes(ex);
    } else {
      sub->add_option("--input", cfg.input_path, "input JSON file")->required();
    }
    sub->add_option("--tol", cfg.tol, "residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--output", cfg.output_path, "write the report here instead of stdout");
    sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };
  common(app.add_subcommand("verify", "run every applicable identity check"), true);
  common(app.add_subcommand("decompose", "split the torsion into kernel and semisimple blocks"), true);
  auto* topo = app.add_subcommand("topology", "characteristic number obstruction and Diophantine listing");
  common(topo, false);
  topo->add_option("--k-max", cfg.k_max, "largest k for the Diophantine listing")->check(CLI::Range(1, 64));
  common(app.add_subcommand("dilaton", "solve the dilaton equation by monotone iteration"), false);
  auto* cat = app.add_subcommand("catalog", "list the named examples");
  cat->add_option("--output", cfg.output_path, "write the listing here instead of stdout");
  cat->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "verify") return run_verify(cfg);
    if (cfg.command == "decompose") return run_decompose(cfg);
    if (cfg.command == "topology") return run_topology(cfg);
    if (cfg.command == "dilaton") return run_dilaton(cfg);
    return run_catalog(cfg);
  } catch (const tg::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
