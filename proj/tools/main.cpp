#include <iostream>

#include "ordapprox/cli.hpp"

int main(int argc, char** argv) {
  return ordapprox::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
