#include <iostream>
#include <string>
#include <vector>

#include "fedscreen/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return fedscreen::run_cli(args, std::cout, std::cerr);
}
