#include <iostream>
#include <string>
#include <vector>

#include "swarmcrit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return swarmcrit::dispatch(args, std::cout, std::cerr);
}
