#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return stable_msu::cli::run(argc, argv, std::cout, std::cerr); }
