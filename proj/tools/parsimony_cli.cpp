#include <string>
#include <vector>

#include "parsimony/cli.hpp"

int main(int argc, char** argv) {
    return parsimony::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
