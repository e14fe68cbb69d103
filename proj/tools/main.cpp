#include <iostream>
#include <string>
#include <vector>

#include "refrec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return refrec::cli::run(args, std::cout, std::cerr);
}
