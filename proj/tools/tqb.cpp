#include <iostream>

#include "tqb/cli.hpp"

int main(int argc, char** argv) { return tqb::cli::run_cli(argc, argv, std::cout, std::cerr); }
