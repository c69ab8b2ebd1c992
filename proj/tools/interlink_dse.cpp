#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "interlink/cli.hpp"

int main(int argc, char** argv) {
  std::optional<std::string> env_outdir;
  if (const char* v = std::getenv(interlink::kOutdirEnvVar)) env_outdir = v;
  return interlink::run_cli(argc, argv, std::cout, std::cerr, env_outdir);
}
