// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace meyerslab {

struct ReproduceRow {
    double mu = 0.0;
    std::string check;
    double value = 0.0;
    std::string target;
    bool pass = false;
};

struct ReproduceReport {
    std::vector<ReproduceRow> rows;
    bool all_pass = false;
};

/// Runs the verification matrix mu in {0.25, 0.5, 0.75} x {lp threshold,
/// Holder exponent, degeneration scan, BMO estimator} and writes report.md
/// and summary.json into out_dir. Artifacts are write-once: an existing
/// report.md is refused. Output bytes depend only on the inputs and the seed.
ReproduceReport reproduce_paper(const std::string& out_dir, std::uint64_t seed);

} // namespace meyerslab
