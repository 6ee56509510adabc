#include <iostream>

#include "qdlab_cli/commands.hpp"

int main(int argc, char** argv) { return qdlab::cli::run_cli(argc, argv, std::cout, std::cerr); }
