#include <iostream>

#include "fastpoisson/cli.hpp"

int main(int argc, char** argv) { return fastpoisson::cli::run(argc, argv, std::cout, std::cerr); }
