#include <string>
#include <vector>

#include "slcd/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return slcd::run_cli(args);
}
