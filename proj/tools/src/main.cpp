#include <iostream>

#include "cat/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return cat::cli::run(args, std::cin, std::cout, std::cerr);
}
