#include <iostream>
#include <string>
#include <vector>

#include "levelbn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return levelbn::run_cli(args, std::cout, std::cerr);
}
