#include <rbc/cli.hpp>

#include <exception>
#include <iostream>

int main(int argc, char** argv)
{
    try {
        return rbc::run_cli(argc, argv, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
