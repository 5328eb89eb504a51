// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace accprec::manifest {

// Reproducibility sidecar written next to every CSV the tool produces.
// Parameters keep insertion order so reruns serialize identically except
// for the timestamp.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> csv_columns;
};

// Writes <csv_path>.manifest.json atomically (temp file plus rename),
// embedding the tool version, CSV schema version, and a UTC timestamp.
void write_alongside(const std::string& csv_path, const RunManifest& m);

}  // namespace accprec::manifest
