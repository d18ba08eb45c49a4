#include <iostream>
#include <string>
#include <vector>

#include "fwg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fwg::cli::run(args, std::cout, std::cerr);
}
