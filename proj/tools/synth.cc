// Writes a synthetic bundle for scale runs.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "subdiv/error.h"
#include "subdiv/synthetic.h"

int main(int argc, char** argv) {
  subdiv::SyntheticOptions opt;
  std::string out = "synthetic118";
  CLI::App app{"Generate a synthetic input bundle", "subdiv-synth"};
  app.add_option("--out", out, "Output directory");
  app.add_option("--buses", opt.buses, "Number of buses");
  app.add_option("--substations", opt.substations, "Number of substations");
  app.add_option("--palette", opt.palette_size, "Palette size");
  app.add_option("--seed", opt.seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto files = subdiv::synthetic_bundle(opt);
    std::filesystem::create_directories(out);
    for (const auto& [name, content] : files) {
      std::ofstream f(std::filesystem::path(out) / name, std::ios::binary);
      f << content;
      if (!f) {
        std::cerr << "error: cannot write " << name << "\n";
        return 2;
      }
    }
  } catch (const subdiv::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
