#include <iostream>

#include "spinphoton/cli.hpp"

int main(int argc, char** argv) {
    return spinphoton::cli::run(argc, argv, std::cout, std::cerr);
}
