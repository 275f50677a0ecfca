#include "fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef GNES_FIXTURE_DIR
#error "GNES_FIXTURE_DIR must point at the shipped fixtures"
#endif

namespace gnes::testing {

namespace fs = std::filesystem;

std::string fixture_dir() { return GNES_FIXTURE_DIR; }

std::string fixture_path(const std::string& name) {
  return (fs::path(fixture_dir()) / (name + ".scn")).string();
}

std::string test_output_dir(const std::string& subdir) {
  const fs::path root = fs::temp_directory_path() / "gnes-test-out";
  const fs::path dir = root / subdir;
  fs::create_directories(dir);
  return dir.string();
}

const std::vector<FixtureRun>& fixture_runs() {
  static const std::vector<FixtureRun> runs = [] {
    std::vector<FixtureRun> out;
    for (const auto& name : builtin_scenario_names()) {
      FixtureRun fr;
      fr.path = fixture_path(name);
      fr.scenario = load_scenario(fr.path);
      fr.outcome = run_scenario(fr.scenario, test_output_dir(name));
      const fs::path csv =
          fs::path(test_output_dir(name)) / "trajectory.csv";
      std::ifstream in(csv);
      if (in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        fr.csv = buf.str();
      }
      out.push_back(std::move(fr));
    }
    return out;
  }();
  return runs;
}

}  // namespace gnes::testing
