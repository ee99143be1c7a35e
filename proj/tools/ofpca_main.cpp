#include <iostream>

#include "ofpca/cli.hpp"

int main(int argc, char** argv) { return ofpca::cli::run(argc, argv, std::cout, std::cerr); }
