#include <iostream>

#include "pbeauty/cli.hpp"

int main(int argc, char** argv) { return pbeauty::cli::run(argc, argv, std::cout, std::cerr); }
