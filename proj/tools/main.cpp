#include <iostream>

#include "jacobi/cli.hpp"

int main(int argc, char** argv) { return jacobi::cli::run(argc, argv, std::cout, std::cerr); }
