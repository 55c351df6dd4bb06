#include <iostream>

#include "cotorsion/cli.hpp"

int main(int argc, char** argv) { return cotorsion::run_command(argc, argv, std::cout, std::cerr); }
