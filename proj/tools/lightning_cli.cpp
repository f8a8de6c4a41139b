#include <iostream>

#include "lightning/cli.hpp"

int main(int argc, char** argv) {
  lightning::RunConfig cfg;
  try {
    cfg = lightning::parse_args(argc, argv);
  } catch (const lightning::Error& e) {
    std::cerr << e.what() << "\n";
    return lightning::kExitUsage;
  }
  return lightning::run_cli(cfg, std::cout, std::cerr);
}
