#include <iostream>

#include "difftaylor/cli.hpp"

int main(int argc, char** argv) { return difftaylor::run_cli(argc, argv, std::cout, std::cerr); }
