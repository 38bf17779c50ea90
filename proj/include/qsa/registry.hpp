#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsa/bitcore.hpp"

namespace qsa {

struct RegistryEntry {
    std::string name;
    std::string path; // packed-binary cache
    uint32_t n = 0;
    uint32_t m = 0;
    std::string origin = "classical-uniform";
};

/// Dataset registry persisted as a JSON file.
class Registry {
public:
    Registry() = default;

    static Registry load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    void upsert(RegistryEntry entry);
    const RegistryEntry* find(const std::string& name) const;
    const std::vector<RegistryEntry>& entries() const { return entries_; }

    /// Opens the dataset behind a registry name, attaching the entry metadata.
    BitMatrix open(const std::string& name) const;

private:
    std::vector<RegistryEntry> entries_;
};

std::filesystem::path default_registry_path();

} // namespace qsa
