#include "cogsel/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return cogsel::cli::run(argc, argv, std::cout, std::cerr);
}
