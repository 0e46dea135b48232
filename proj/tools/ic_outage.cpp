#include <iostream>

#include "icoutage/cli.hpp"

int main(int argc, char** argv) { return icoutage::run_cli(argc, argv, std::cout, std::cerr); }
