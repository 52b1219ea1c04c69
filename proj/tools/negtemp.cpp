#include <iostream>

#include "negtemp/cli.hpp"

int main(int argc, char** argv) { return negtemp::cli_main(argc, argv, std::cout, std::cerr); }
