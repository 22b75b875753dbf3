#include <iostream>
#include <string>
#include <vector>

#include "fraclab/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fraclab::cli_main(args, std::cout, std::cerr);
}
