#include <vector>

#include "hjhom/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hjhom::run_cli(args);
}
