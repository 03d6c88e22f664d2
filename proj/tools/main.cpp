#include <iostream>

#include "phosphene/cli.hpp"

int main(int argc, char** argv) { return phosphene::run_cli(argc, argv, std::cout, std::cerr); }
