#include <iostream>

#include "biasgame/cli.hpp"

int main(int argc, char** argv) {
    return biasgame::cli::run(argc, argv, std::cout, std::cerr);
}
