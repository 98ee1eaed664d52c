#include <iostream>

#include "symplectic/cli.hpp"

int main(int argc, char** argv) {
  return symplectic::run_cli(argc, argv, std::cout, std::cerr);
}
