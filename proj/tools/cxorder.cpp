#include <iostream>

#include "cxorder/cli.hpp"

int main(int argc, char** argv) { return cxorder::cli::main(argc, argv, std::cout, std::cerr); }
