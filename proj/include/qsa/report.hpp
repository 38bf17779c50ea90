#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsa/errors.hpp"

namespace qsa {

constexpr int kReportSchemaVersion = 1;

/// Machine-readable analysis document. One "datasets" object keyed by
/// dataset name; every numeric result lives under the dataset it came from
/// together with the parameters used.
struct Report {
    nlohmann::json doc;

    static Report create();
    static Report load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    nlohmann::json& dataset(const std::string& name);

    /// Merged comparison document. Throws on schema-version mismatch or on
    /// dataset names that appear in more than one input.
    static Report merge(const std::vector<Report>& reports);
};

/// Rows sorted by (n, m); columns picked from each dataset's entries.
std::string report_table(const Report& report, const std::string& field);

} // namespace qsa
