#include <iostream>

#include "speedid_cli/commands.hpp"

int main(int argc, char** argv) { return speedid::cli::run(argc, argv, std::cout, std::cerr); }
