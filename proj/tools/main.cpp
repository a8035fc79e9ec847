#include <iostream>

#include "zkid/cli.hpp"

int main(int argc, char** argv) {
  return zkid::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
