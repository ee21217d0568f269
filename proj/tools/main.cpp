#include <vector>
#include <string>

#include "flrwwave/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return flrw::cli::run(args);
}
