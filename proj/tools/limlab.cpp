#include <iostream>

#include "limlab/cli.hpp"

int main(int argc, char** argv) { return limlab::run_cli(argc, argv, std::cout, std::cerr); }
