#include <iostream>

#include "grbb/cli.hpp"

int main(int argc, char** argv) { return grbb::cli::main_entry(argc, argv, std::cout, std::cerr); }
