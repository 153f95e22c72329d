// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "specseq/cli.hpp"

int main(int argc, char** argv) { return specseq::cli_main(argc, argv, std::cout, std::cerr); }
