#include <iostream>
#include <string>
#include <vector>

#include "reebsplit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return reebsplit::run_cli(args, std::cout, std::cerr);
}
