#include <iostream>
#include <string>
#include <vector>

#include "sths/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sths::cli::run(args, std::cout, std::cerr);
}
