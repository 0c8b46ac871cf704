#include <iostream>

#include "opideal/cli.hpp"

int main(int argc, char** argv) { return opideal::cli::run(argc, argv, std::cout, std::cerr); }
