#include <iostream>

#include "mhv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mhv::runCli(args, std::cout, std::cerr);
}
