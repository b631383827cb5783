#include "cli.hpp"

#include <cfenv>
#include <iostream>

int main(int argc, char** argv) {
  // Reports are only byte-reproducible under one rounding mode.
  if (std::fegetround() != FE_TONEAREST) {
    std::cerr << "error: floating-point rounding mode is not round-to-nearest\n";
    return ccnbif::kExitNumerical;
  }
  return ccnbif::run(argc, argv, std::cout, std::cerr);
}
