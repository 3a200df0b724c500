#include <iostream>
#include <string>
#include <vector>

#include "nevpick/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return nevpick::cli::run(args, std::cout, std::cerr);
}
