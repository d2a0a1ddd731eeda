#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "pcbench/cli.hpp"
#include "pcbench/errors.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const pcbench::CliOptions options = pcbench::parse_cli(args);
    return pcbench::run_cli(options);
  } catch (const pcbench::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n(run with --help for usage)\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
