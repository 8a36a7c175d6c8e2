#include <iostream>

#include "taubnut/cli/commands.hpp"

int main(int argc, char** argv) { return taubnut::cli::run(argc, argv, std::cout, std::cerr); }
