#include <iostream>

#include "gwlab/commands.hpp"

int main(int argc, char** argv) { return gwlab::cli::run(argc, argv, std::cout, std::cerr); }
