#include <iostream>

#include "fence/cli.hpp"

int main(int argc, char** argv) { return fence::run_cli(argc, argv, std::cout, std::cerr); }
