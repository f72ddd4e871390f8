#include <exception>
#include <iostream>

#include "landau/cli.hpp"

int main(int argc, char** argv) {
    try {
        return landau::run_cli(argc, argv, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return landau::kExitInputError;
    }
}
