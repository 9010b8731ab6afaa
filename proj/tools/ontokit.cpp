#include <iostream>

#include "ontokit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ontokit::run(args, std::cout, std::cerr);
}
