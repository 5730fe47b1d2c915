#include <iostream>
#include <string>
#include <vector>

#include "tracelab/cli/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tracelab::cli::main_entry(args, std::cout, std::cerr);
}
