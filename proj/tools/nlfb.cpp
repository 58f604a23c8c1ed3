#include "nlfb/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return nlfb::run_cli(argc, argv, std::cout, std::cerr); }
