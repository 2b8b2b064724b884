#include <iostream>
#include <string>
#include <vector>

#include "xorder/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return xorder::run_cli(args, std::cout, std::cerr);
}
