#include <iostream>

#include "csiaug_cli.hpp"

int main(int argc, char** argv) {
  return csiaug::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
