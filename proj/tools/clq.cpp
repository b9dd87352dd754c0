#include <iostream>

#include "clq/cli_runner.hpp"

int main(int argc, char** argv) { return clq::cli::run(argc, argv, std::cout, std::cerr); }
