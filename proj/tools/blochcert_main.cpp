#include "blochcert/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return blochcert::run_cli(argc, argv, std::cout, std::cerr); }
