#include <iostream>

#include "bellchain/cli.hpp"

int main(int argc, char** argv) {
    return bellchain::run_cli(argc, argv, std::cout, std::cerr);
}
