#include <iostream>

#include "beamforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return beamforge::dispatch(args, std::cout, std::cerr);
}
