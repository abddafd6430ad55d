#include <iostream>

#include "netpop/cli.hpp"

int main(int argc, char** argv) {
  return netpop::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
