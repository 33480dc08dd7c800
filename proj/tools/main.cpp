#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return l2approx::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
