#include <iostream>

#include "ttbfl/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ttbfl::cli::run_cli(args, std::cout, std::cerr);
}
