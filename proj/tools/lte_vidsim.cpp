#include <iostream>

#include "ltevid/sim/cli.hpp"

int main(int argc, char** argv) { return ltevid::sim::cli_main(argc, argv, std::cout, std::cerr); }
