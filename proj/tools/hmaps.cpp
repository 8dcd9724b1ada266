#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "hmaps/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    std::cerr << hmaps::usage();
    return hmaps::kExitValidation;
  }
  const char* no_color = std::getenv("NO_COLOR");
  const bool color = (no_color == nullptr || *no_color == '\0') && isatty(STDERR_FILENO);
  return hmaps::run_cli(args, std::cout, std::cerr, color);
}
