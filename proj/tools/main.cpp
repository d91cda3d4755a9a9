#include "grig/cli.hpp"

int main(int argc, char** argv) {
  return grig::cli::run(std::vector<std::string>(argv, argv + argc));
}
