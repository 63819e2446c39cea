#pragma once

// Checks behind the `verify-all` subcommand and the acceptance binary. Each
// check returns rows; a check passes when all of its rows pass.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "heatfock/polynomial.hpp"

namespace heatfock {

struct CheckRow {
  std::string experiment;
  double T = 0.0;
  int steps = 0;  // 0 for exact checks
  long paths = 0;
  std::uint64_t seed = 0;
  cplx target;
  cplx estimate;
  double stderr = 0.0;
  bool statistical = false;  // pass means |estimate - target| <= 3 stderr
  bool pass = false;

  /// Statistical row off by more than 4 stderr.
  bool hard_fail() const;
};

struct SuiteOptions {
  ConfigPtr group;  // reference group
  double T = 1.0;
  std::uint64_t seed = 1;
  int workers = 1;
  /// Multiplies every Monte Carlo path count (minimum 100 paths).
  double path_scale = 1.0;
};

bool all_pass(const std::vector<CheckRow>& rows);

std::vector<CheckRow> check_taylor_isometry(const SuiteOptions& opts);
std::vector<CheckRow> check_worked_value(const SuiteOptions& opts);
std::vector<CheckRow> check_mean_value(const SuiteOptions& opts);
std::vector<CheckRow> check_skeleton(const SuiteOptions& opts);
std::vector<CheckRow> check_ito_isometry(const SuiteOptions& opts);
std::vector<CheckRow> check_chaos_expansion(const SuiteOptions& opts);
std::vector<CheckRow> check_algebraic_identities(const SuiteOptions& opts);
std::vector<CheckRow> check_fejer_grading(const SuiteOptions& opts);
std::vector<CheckRow> check_projection_convergence(const SuiteOptions& opts);
std::vector<CheckRow> check_bounds(const SuiteOptions& opts);

struct SuiteCheck {
  int id;
  const char* name;
  std::function<std::vector<CheckRow>(const SuiteOptions&)> run;
};

/// The ten checks of verify-all, in order.
const std::vector<SuiteCheck>& suite_checks();

}  // namespace heatfock
