#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  const auto parsed = ndrl::cli::parse_args(args);
  if (!parsed.command) {
    (parsed.exit_code == 0 ? std::cout : std::cerr) << parsed.output << '\n';
    return parsed.exit_code;
  }
  return ndrl::cli::run_command(*parsed.command);
}
