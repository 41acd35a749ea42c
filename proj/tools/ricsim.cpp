// SPDX-License-Identifier: Apache-2.0
#include <csignal>
#include <iostream>

#include "ricsim/cli.hpp"

namespace {
extern "C" void on_signal(int) { ricsim::cli::stop_requested = true; }
}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  return ricsim::cli::main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
