#include <iostream>

#include "dynav/bench/cli.hpp"

int main(int argc, char** argv) { return dynav::run_cli(argc, argv, std::cout, std::cerr); }
