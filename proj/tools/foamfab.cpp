#include <iostream>

#include "foamfab/cli.hpp"

int main(int argc, char** argv) {
    return foamfab::cli_main(argc, argv, std::cout, std::cerr);
}
