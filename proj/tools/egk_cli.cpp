// SPDX-License-Identifier: Apache-2.0
#include "egk/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return egk::cli::run(argc, argv, std::cout, std::cerr); }
