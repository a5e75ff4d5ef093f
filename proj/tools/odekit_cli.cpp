#include <iostream>
#include <string>
#include <vector>

#include "odekit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return odekit::cli::run_cli(args, std::cout, std::cerr);
}
