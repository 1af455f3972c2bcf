#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "subdiv/coloring.h"

namespace subdiv {

struct RunConfig {
  std::string cdf;
  std::string submap;
  std::string impact;
  /// Optional; built-in defaults when empty.
  std::string template_path;
  std::string palette;
  std::string scenario;
  double threshold = 0.25;
  std::optional<double> p_total_mw;
  std::uint64_t seed = 1;
  std::vector<Algorithm> algorithms = {Algorithm::kGame, Algorithm::kGreedy,
                                       Algorithm::kSequential, Algorithm::kRandomized};
  /// Output directory; nothing is written when empty.
  std::string out_dir;
  std::size_t repeat = 1;
  std::size_t workers = 1;
  bool dot = false;
};

/// Fills unset paths from `dir` (system.cdf, submap.json or submap.csv,
/// impact.csv, template.json, palette.json, scenario.json) when the file
/// exists there.
void apply_bundle_dir(RunConfig& cfg, const std::string& dir);

/// Entry point of the `subdiv` tool. `args` excludes the program name.
/// Returns 0 on success, 1 on internal errors, 2 on input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// FNV-1a 64-bit.
std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace subdiv
