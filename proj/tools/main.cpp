// SPDX-License-Identifier: Apache-2.0
#include "lcris/cli.hpp"

int main(int argc, char** argv) { return lcris::cli::run(argc, argv); }
