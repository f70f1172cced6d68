#include <iostream>

#include "causalpost/cli.hpp"

int main(int argc, char** argv) { return causalpost::run_cli(argc, argv, std::cout, std::cerr); }
