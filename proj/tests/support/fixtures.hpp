#pragma once

#include <string>
#include <vector>

#include "gnes/runner.hpp"
#include "gnes/scenario.hpp"

namespace gnes::testing {

std::string fixture_dir();
std::string fixture_path(const std::string& name);  // name without extension

/// One shipped .scn fixture, loaded from disk and run once; results are
/// memoized so every test that needs a trajectory shares the same runs.
struct FixtureRun {
  std::string path;
  Scenario scenario;
  RunOutcome outcome;
  std::string csv;  // trajectory.csv as written to disk
};
const std::vector<FixtureRun>& fixture_runs();

/// Scratch directory for tests that write output trees.
std::string test_output_dir(const std::string& subdir);

}  // namespace gnes::testing
