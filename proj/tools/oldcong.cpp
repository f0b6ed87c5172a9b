#include <iostream>

#include "oldcong/cli.hpp"

int main(int argc, char** argv) { return oldcong::cli::run(argc, argv, std::cout, std::cerr); }
