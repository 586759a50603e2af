#include <vector>
#include <string>

#include "relaylab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return relaylab::cli::run(args);
}
