#include "qsa/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qsa {

Report Report::create() {
    Report r;
    r.doc["schema_version"] = kReportSchemaVersion;
    r.doc["datasets"] = nlohmann::json::object();
    return r;
}

Report Report::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    Report r;
    try {
        in >> r.doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    if (!r.doc.contains("schema_version") || !r.doc.contains("datasets"))
        throw FormatError(path.string() + ": not a report document");
    return r;
}

void Report::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

nlohmann::json& Report::dataset(const std::string& name) { return doc["datasets"][name]; }

Report Report::merge(const std::vector<Report>& reports) {
    if (reports.empty()) throw InvalidArgument("merge: no reports given");
    Report merged = create();
    std::vector<std::string> conflicts;
    for (const Report& r : reports) {
        const int version = r.doc.at("schema_version").get<int>();
        if (version != kReportSchemaVersion)
            throw FormatError("merge: schema version mismatch (got " + std::to_string(version) +
                              ", expected " + std::to_string(kReportSchemaVersion) + ")");
        for (const auto& [name, entry] : r.doc.at("datasets").items()) {
            if (merged.doc["datasets"].contains(name)) {
                conflicts.push_back(name);
                continue;
            }
            merged.doc["datasets"][name] = entry;
        }
    }
    if (!conflicts.empty()) {
        std::string msg = "merge: conflicting dataset names:";
        for (const auto& n : conflicts) msg += ' ' + n;
        throw InvalidArgument(msg);
    }
    return merged;
}

std::string report_table(const Report& report, const std::string& field) {
    struct Row {
        uint32_t n, m;
        std::string name;
        double value;
    };
    std::vector<Row> rows;
    for (const auto& [name, entry] : report.doc.at("datasets").items()) {
        if (!entry.contains(field)) continue;
        Row row;
        row.name = name;
        row.n = entry.value("n", 0u);
        row.m = entry.value("m", 0u);
        row.value = entry.at(field).get<double>();
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.n, a.m, a.name) < std::tie(b.n, b.m, b.name);
    });
    std::ostringstream os;
    os << "name\tn\tm\t" << field << '\n';
    for (const auto& row : rows)
        os << row.name << '\t' << row.n << '\t' << row.m << '\t' << row.value << '\n';
    return os.str();
}

} // namespace qsa
