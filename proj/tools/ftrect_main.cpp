#include <iostream>

#include "ftrect/cli.hpp"

int main(int argc, char** argv) { return ftrect::run_cli(argc, argv, std::cout, std::cerr); }
