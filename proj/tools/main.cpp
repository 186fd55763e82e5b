#include "nongauss/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return nongauss::cli::run(argc, argv, std::cout, std::cerr); }
