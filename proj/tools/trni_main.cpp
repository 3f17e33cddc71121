#include "trni/cli.hpp"

#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const char* env = std::getenv("TRNI_COLOR");
  bool color = isatty(STDOUT_FILENO) && !(env && std::strcmp(env, "0") == 0);
  return trni::run(args, std::cout, std::cerr, color);
}
