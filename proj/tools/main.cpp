#include <iostream>

#include "tpmlab/cli.hpp"

int main(int argc, char** argv) {
  return tpmlab::cli::run(argc, argv, std::cout, std::cerr);
}
