// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#include "accprec/manifest.hpp"

#include <unistd.h>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "accprec/version.hpp"

namespace accprec::manifest {
namespace {

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

void write_alongside(const std::string& csv_path, const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    nlohmann::ordered_json params;
    for (const auto& [key, value] : m.parameters) params[key] = value;
    j["parameters"] = std::move(params);
    j["csv_columns"] = m.csv_columns;
    j["csv_schema_version"] = kCsvSchemaVersion;
    j["tool_version"] = kVersion;
    j["created_utc"] = utc_now();

    std::string path = csv_path + ".manifest.json";
    std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << j.dump(2) << '\n';
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

}  // namespace accprec::manifest
