#include <iostream>

#include "wristex/cli.hpp"

int main(int argc, char** argv) { return wristex::cli::run(argc, argv, std::cout, std::cerr); }
