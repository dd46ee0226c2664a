#include <iostream>

#include "qot/cli.hpp"

int main(int argc, char** argv) { return qot::run_cli(argc, argv, std::cout, std::cerr); }
