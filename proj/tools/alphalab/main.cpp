#include <iostream>

#include "alphalab/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return alphalab::cli::run(args, std::cout, std::cerr);
}
