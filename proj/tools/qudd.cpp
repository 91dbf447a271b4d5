// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "qudd/cli/commands.hpp"

int main(int argc, char** argv) { return qudd::cli::run_cli(argc, argv, std::cout, std::cerr); }
