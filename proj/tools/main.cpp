#include <iostream>

#include "reqclass/cli.hpp"

int main(int argc, char** argv) {
    return reqclass::run_cli(argc, argv, std::cout, std::cerr);
}
