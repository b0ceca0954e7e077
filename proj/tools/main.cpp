#include <iostream>

#include "bertrand/cli.hpp"

int main(int argc, char** argv) { return bertrand::run_cli(argc, argv, std::cout, std::cerr); }
