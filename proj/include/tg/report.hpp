#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tg {

/// Raised when a computation is requested on data that fails its mathematical preconditions.
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double residual = 1e-10;
  double cluster = 1e-8;
};

struct ResidualRow {
  std::string name;
  std::string equation;  // the identity being checked, written out
  double value = 0.0;
  double tolerance = 0.0;
  bool asserted = true;

  bool passed() const { return !asserted || (std::isfinite(value) && value <= tolerance); }
};

struct StructureReport {
  std::string title;
  std::vector<ResidualRow> rows;
  std::vector<std::string> notes;
  bool hypotheses_met = true;

  void add(std::string name, std::string equation, double value, double tol, bool asserted = true) {
    rows.push_back({std::move(name), std::move(equation), value, tol, asserted});
  }

  void note(std::string s) { notes.push_back(std::move(s)); }

  const ResidualRow* find(const std::string& name) const {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const ResidualRow& r) { return r.name == name; });
    return it == rows.end() ? nullptr : &*it;
  }

  double value(const std::string& name) const {
    const ResidualRow* r = find(name);
    if (!r) throw std::out_of_range("no residual row named " + name);
    return r->value;
  }

  bool passed() const {
    return hypotheses_met && std::all_of(rows.begin(), rows.end(), [](const ResidualRow& r) { return r.passed(); });
  }

  void append(const StructureReport& other, const std::string& prefix = {}) {
    for (ResidualRow r : other.rows) {
      if (!prefix.empty()) r.name = prefix + r.name;
      rows.push_back(std::move(r));
    }
    for (const auto& n : other.notes) notes.push_back(prefix.empty() ? n : prefix + n);
    hypotheses_met = hypotheses_met && other.hypotheses_met;
  }
};

}  // namespace tg
