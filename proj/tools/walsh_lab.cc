#include <iostream>
#include <string>
#include <vector>

#include "walshlab/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return walshlab::run_cli(args, std::cout, std::cerr);
}
