#include <iostream>

#include "blackwell/cli.hpp"

int main(int argc, char** argv) { return blackwell::cli::run(argc, argv, std::cout, std::cerr); }
