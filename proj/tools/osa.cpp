#include <iostream>

#include "osa/cli.hpp"

int main(int argc, char** argv) { return osa::cli::run(argc, argv, std::cout, std::cerr); }
