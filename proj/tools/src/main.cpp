#include <iostream>

#include "proxtrace_cli/cli.hpp"

int main(int argc, char** argv) { return proxtrace::cli::run(argc, argv, std::cout, std::cerr); }
