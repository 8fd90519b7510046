#include <iostream>

#include "gradeff/cli.hpp"

int main(int argc, char** argv) { return gradeff::main_entry(argc, argv, std::cin, std::cout, std::cerr); }
