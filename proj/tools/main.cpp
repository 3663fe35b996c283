#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return fluidair::cli_main(argc, argv, std::cout, std::cerr);
}
