#include <iostream>

#include "focksynth/cli.hpp"

int main(int argc, char** argv) { return focksynth::cli::run(argc, argv, std::cout, std::cerr); }
