#include "cardguess/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return cardguess::run_cli(argc, argv, std::cout, std::cerr);
}
