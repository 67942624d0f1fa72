#include <iostream>

#include "polymer/cli/commands.hpp"

int main(int argc, char** argv) { return polymer::cli::run(argc, argv, std::cout, std::cerr); }
