#include <iostream>

#include "specorder/cli.hpp"

int main(int argc, char** argv) { return specorder::cli::run(argc, argv, std::cout, std::cerr); }
