#include <iostream>

#include "cep/cli.hpp"

int main(int argc, char** argv) { return cep::cli::run(argc, argv, std::cout, std::cerr); }
