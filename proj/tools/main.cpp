#include <iostream>

#include "tacshade/cli.hpp"

int main(int argc, char** argv) { return tacshade::run_cli(argc, argv, std::cout, std::cerr); }
