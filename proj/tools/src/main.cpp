#include <iostream>

#include "simt/cli/commands.hpp"

int main(int argc, char** argv) { return simt::cli::runCli(argc, argv, std::cout, std::cerr); }
