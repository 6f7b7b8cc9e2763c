#include <iostream>

#include "jetsym/cli.hpp"

int main(int argc, char** argv) { return jetsym::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
