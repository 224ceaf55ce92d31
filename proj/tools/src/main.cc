#include <iostream>

#include "hybridnet_cli/cli.h"

int main(int argc, char** argv) {
  return hybridnet::cli::run(argc, argv, std::cout, std::cerr);
}
