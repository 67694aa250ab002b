#include <iostream>

#include "sle_cli/cli.hpp"

int main(int argc, char** argv) { return sle::cli::run(argc, argv, std::cout, std::cerr); }
