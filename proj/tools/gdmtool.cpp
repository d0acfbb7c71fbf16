#include <iostream>
#include <string>
#include <vector>

#include "geminal/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return geminal::cli::run(args, std::cout, std::cerr);
}
