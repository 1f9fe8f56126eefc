#include <iostream>

#include "copmaint/cli/commands.hpp"

int main(int argc, char** argv) { return copmaint::cli::run_cli(argc, argv, std::cout, std::cerr); }
