#include <iostream>
#include <string>
#include <vector>

#include "hmiv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hmiv::cli::run_cli(args, std::cout, std::cerr, std::cin);
}
