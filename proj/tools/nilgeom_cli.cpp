#include <cstdio>
#include <string>
#include <vector>

#include "nilgeom/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto res = nilgeom::cli::run_command(args);
  std::fputs(res.text.c_str(), res.status == 2 ? stderr : stdout);
  return res.status;
}
