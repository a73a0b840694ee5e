#include "oseries/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return oseries::cli::run(argc, argv, std::cout, std::cerr); }
