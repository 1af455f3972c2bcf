#include <iostream>
#include <string>
#include <vector>

#include "subdiv/app.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return subdiv::run_cli(args, std::cout, std::cerr);
}
