#include <string>
#include <vector>

#include "garchboot/cli.hpp"

int main(int argc, char** argv) {
    return garchboot::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
