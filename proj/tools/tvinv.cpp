#include <iostream>

#include "tvinv/cli.hpp"

int main(int argc, char** argv) { return tvinv::run_cli(argc, argv, std::cout, std::cerr); }
