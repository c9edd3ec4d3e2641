#include <iostream>
#include <string>
#include <vector>

#include "semadapt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return semadapt::run_cli(args, std::cout, std::cerr);
}
