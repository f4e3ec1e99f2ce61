#include <iostream>
#include <string>
#include <vector>

#include "lcmwarp/cli.hpp"

int main(int argc, char** argv) {
  return lcmwarp::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
