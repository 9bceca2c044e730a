#include <iostream>

#include "occtime/cli.hpp"

int main(int argc, char** argv) { return occtime::run_cli(argc, argv, std::cout, std::cerr); }
