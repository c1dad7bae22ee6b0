#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) {
  return causalkit::cli::run_main(argc, argv, std::cout, std::cerr);
}
