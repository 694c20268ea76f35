#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mubkit {

/// Outcome of one verification: the numeric residual against the tolerance,
/// plus the verdict of the exact route whenever one was run.
struct VerificationReport {
  std::string check;
  bool passed = true;
  double tolerance = 0.0;
  double max_residual = 0.0;
  std::optional<bool> exact_passed;
  std::vector<std::pair<std::string, double>> residuals;
  std::vector<std::string> notes;
  // Present for overlap checks: |<u_i|v_j>| row by row.
  std::vector<std::vector<double>> overlap_table;

  void add_residual(std::string name, double value) {
    if (value > max_residual) max_residual = value;
    if (!(value < tolerance)) passed = false;
    residuals.emplace_back(std::move(name), value);
  }

  double residual(const std::string& name) const {
    for (const auto& [k, v] : residuals)
      if (k == name) return v;
    return -1.0;
  }

  void fail_exact(std::string why) {
    exact_passed = false;
    passed = false;
    notes.push_back(std::move(why));
  }
};

}  // namespace mubkit
