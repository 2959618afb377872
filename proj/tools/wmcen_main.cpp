#include <string>
#include <vector>

#include "wmcen/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wmcen::run_cli(args);
}
