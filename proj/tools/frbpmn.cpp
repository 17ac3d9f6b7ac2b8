#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "frbpmn/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    bool color = frbpmn::cli::color_enabled(::isatty(STDOUT_FILENO) != 0, std::getenv("FRBPMN_COLOR"));
    return frbpmn::cli::run_cli(args, std::cout, std::cerr, color);
}
