// idg - toy equation-of-state tool: prints the ideal gas volume for the
// given particle count, temperature and pressure.
//
//   $ idg 1000 2.0 1.0
//   2000.0

#include <cstdlib>
#include <iostream>
#include <string>

#include "signac/canonical.hpp"
#include "signac/errors.hpp"

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: idg N kT p\n";
        return 2;
    }
    char* end = nullptr;
    const double n = std::strtod(argv[1], &end);
    if (end == argv[1] || *end != '\0') {
        std::cerr << "idg: not a number: " << argv[1] << "\n";
        return 2;
    }
    const double kt = std::strtod(argv[2], &end);
    if (end == argv[2] || *end != '\0') {
        std::cerr << "idg: not a number: " << argv[2] << "\n";
        return 2;
    }
    const double p = std::strtod(argv[3], &end);
    if (end == argv[3] || *end != '\0') {
        std::cerr << "idg: not a number: " << argv[3] << "\n";
        return 2;
    }
    try {
        std::cout << signac::canonical_float_text(n * kt / p) << "\n";
    } catch (const signac::Error&) {
        std::cerr << "idg: volume is not finite (p must be non-zero)\n";
        return 1;
    }
    return 0;
}
