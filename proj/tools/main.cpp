#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return sud::cli_main(argc, argv, std::cout, std::cerr); }
