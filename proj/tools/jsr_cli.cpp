#include <string>
#include <vector>

#include "jsr/cli_config.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return jsr::cli_main(args);
}
