#include <iostream>

#include "cpca/cli.hpp"

int main(int argc, char** argv) {
  return cpca::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
