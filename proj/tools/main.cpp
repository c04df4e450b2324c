#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  const auto env = netdef::cli::environment_from_process();
  std::vector<std::string> args(argv + 1, argv + argc);
  return netdef::cli::run(args, std::cout, std::cerr, env);
}
