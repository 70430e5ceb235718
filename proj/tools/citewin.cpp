#include <iostream>
#include <string>
#include <vector>

#include "citewin/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return citewin::run_cli(args, std::cout, std::cerr);
}
