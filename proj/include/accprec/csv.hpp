// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace accprec::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name; -1 when absent.
    int column(const std::string& name) const;
};

// Shortest round-trip decimal form (locale-independent); parsing it back
// recovers the exact double.
std::string format_double(double x);
std::string format_u64(std::uint64_t v);

double parse_double(const std::string& field);

// Serializes header plus rows, RFC-style quoting only where needed, and
// replaces the destination atomically (temp file in the same directory,
// then rename). Throws std::runtime_error on I/O failure.
void write_file(const std::string& path, const Table& table);

Table read_file(const std::string& path);

}  // namespace accprec::csv
