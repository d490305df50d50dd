#include <iostream>

#include "katka/cli.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return katka::run_cli(argc, argv, std::cout, std::cerr);
}
