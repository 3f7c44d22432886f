#include <iostream>

#include "zemtwist_cli/commands.hpp"

int main(int argc, char** argv) { return zemtwist::cli::run_cli(argc, argv, std::cout, std::cerr); }
