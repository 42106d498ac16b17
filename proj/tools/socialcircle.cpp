// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "socialcircle/cli.hpp"

int main(int argc, char** argv) { return socialcircle::cli::run(argc, argv); }
