#include <iostream>

#include "vfc_cli/cli.hpp"

int main(int argc, char** argv) { return vfc::cli::run(argc, argv, std::cout, std::cerr); }
