#include <iostream>
#include <string>
#include <vector>

#include "chunkforge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return chunkforge::cli::run(args, std::cout, std::cerr);
}
