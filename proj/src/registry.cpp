#include "qsa/registry.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace qsa {

Registry Registry::load(const std::filesystem::path& path) {
    Registry reg;
    std::ifstream in(path);
    if (!in) return reg; // missing registry = empty registry
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    for (const auto& je : j.at("datasets")) {
        RegistryEntry entry;
        entry.name = je.at("name").get<std::string>();
        entry.path = je.at("path").get<std::string>();
        entry.n = je.at("n").get<uint32_t>();
        entry.m = je.value("m", 0u);
        entry.origin = je.value("origin", std::string("classical-uniform"));
        reg.entries_.push_back(std::move(entry));
    }
    return reg;
}

void Registry::save(const std::filesystem::path& path) const {
    nlohmann::json j;
    auto& list = j["datasets"] = nlohmann::json::array();
    for (const auto& e : entries_)
        list.push_back({{"name", e.name},
                        {"path", e.path},
                        {"n", e.n},
                        {"m", e.m},
                        {"origin", e.origin}});
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void Registry::upsert(RegistryEntry entry) {
    for (auto& existing : entries_) {
        if (existing.name == entry.name) {
            existing = std::move(entry);
            return;
        }
    }
    entries_.push_back(std::move(entry));
}

const RegistryEntry* Registry::find(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.name == name) return &e;
    return nullptr;
}

BitMatrix Registry::open(const std::string& name) const {
    const RegistryEntry* entry = find(name);
    if (!entry) throw InvalidArgument("registry: unknown dataset '" + name + "'");
    BitMatrix bm = load_bitstrings(entry->path, FileFormat::PackedBinary);
    DatasetMeta meta;
    meta.name = entry->name;
    meta.declared_n = entry->n;
    meta.cycle = entry->m;
    meta.origin = origin_from_name(entry->origin);
    bm.set_meta(std::move(meta));
    return bm;
}

std::filesystem::path default_registry_path() {
    if (const char* env = std::getenv("QSA_REGISTRY")) return env;
    return "qsa_registry.json";
}

} // namespace qsa
