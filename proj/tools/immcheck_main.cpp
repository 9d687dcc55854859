#include <iostream>
#include <vector>

#include "immcheck/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return immcheck::cli_run(std::move(args), std::cout, std::cerr);
}
