#include <iostream>
#include <string>
#include <vector>

#include "klow/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return klow::cli::dispatch(args, std::cout, std::cerr);
}
