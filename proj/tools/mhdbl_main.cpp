#include <string>
#include <vector>

#include "mhdbl/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mhdbl::cli_dispatch(args);
}
