#include <iostream>
#include <string>
#include <vector>

#include "aloha/harness.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return aloha::cli::run(args, std::cout, std::cerr);
}
