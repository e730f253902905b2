#include <cstdlib>
#include <iostream>

#include <Eigen/Core>

#include "cli.hpp"

int main(int argc, char** argv) {
  // thread count is the only setting read from the environment
  if (const char* t = std::getenv("NLX_THREADS")) {
    const int n = std::atoi(t);
    if (n > 0) Eigen::setNbThreads(n);
  }
  return nlx::cli::run(argc, argv, std::cout, std::cerr);
}
