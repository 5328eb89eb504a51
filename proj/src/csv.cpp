// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#include "accprec/csv.hpp"

#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace accprec::csv {
namespace {

bool needs_quoting(const std::string& field) {
    return field.find_first_of(",\"\n\r") != std::string::npos;
}

void append_field(std::string& out, const std::string& field) {
    if (!needs_quoting(field)) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc())
        throw std::runtime_error("double formatting failed");
    return std::string(buf, end);
}

std::string format_u64(std::uint64_t v) {
    return std::to_string(v);
}

double parse_double(const std::string& field) {
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw std::runtime_error("not a numeric CSV field: " + field);
    return x;
}

void write_file(const std::string& path, const Table& table) {
    std::string body;
    auto append_row = [&body](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) body += ',';
            append_field(body, row[i]);
        }
        body += '\n';
    };
    append_row(table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::runtime_error("CSV row width differs from header");
        append_row(row);
    }

    std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!out) {
            std::remove(tmp.c_str());
            throw std::runtime_error("short write to " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move " + tmp + " into place");
    }
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    Table table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::ifstream::traits_type::eof())
            break;
        auto fields = split_line(line);
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

}  // namespace accprec::csv
