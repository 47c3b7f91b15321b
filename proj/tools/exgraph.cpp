#include <iostream>
#include <string>
#include <vector>

#include "exgraph/harness.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return exgraph::run_cli(args, std::cout, std::cerr, std::cin);
}
