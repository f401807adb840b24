#include <iostream>

#include "soasim/cli/cli.hpp"

int main(int argc, char** argv) { return soasim::cli::run_cli(argc, argv, std::cout, std::cerr); }
