#include <iostream>
#include <string>
#include <vector>

#include "uict/cli/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return uict::cli::execute(args, std::cout, std::cerr).exit_code;
}
