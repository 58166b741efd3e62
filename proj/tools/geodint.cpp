#include <iostream>

#include "geodint/cli.hpp"

int main(int argc, char** argv) { return geodint::cli::run(argc, argv, std::cout, std::cerr); }
