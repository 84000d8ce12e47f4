#include <iostream>
#include <string>
#include <vector>

#include "fuzzbis/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fuzzbis::run_cli(args, std::cout, std::cerr);
}
