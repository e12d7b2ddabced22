#include <iostream>

#include "lopact/cli.hpp"

int main(int argc, char** argv) { return lopact::cli::main(argc, argv, std::cout, std::cerr); }
