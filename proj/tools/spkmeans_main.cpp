#include <iostream>

#include "spkm/cli.hpp"

int main(int argc, char** argv) { return spkm::cli::run_cli(argc, argv, std::cout, std::cerr); }
