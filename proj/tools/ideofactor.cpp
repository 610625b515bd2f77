#include "ideofactor/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ideofactor::run_cli(args, std::cout, std::cerr);
}
