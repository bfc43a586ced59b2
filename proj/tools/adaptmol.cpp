// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "adaptmol/cli.hpp"

int main(int argc, char** argv) { return adaptmol::dispatch(argc, argv, std::cout, std::cerr); }
