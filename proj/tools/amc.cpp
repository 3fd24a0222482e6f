#include <iostream>

#include "amc/commands.hpp"

int main(int argc, char** argv) { return amc::run_cli(argc, argv, std::cout, std::cerr); }
