#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "privalog/relation.hpp"

namespace privalog {

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error("data error: " + msg) {}
};

/// Loads `<dir>/<table>.csv` + `<dir>/<table>.json` for every schema in
/// `schemas`. The JSON manifest is authoritative for types and must match the
/// program's schema directive exactly (names, order, privacy, dtype). Rows
/// are validated cell by cell, deduplicated, and string columns get CRC32
/// shadow columns.
Database load_database(const std::filesystem::path& dir,
                       const std::vector<SchemaDecl>& schemas);

/// Writes CSV + manifest per table; load ∘ save is the identity on typed
/// content.
void save_database(const std::filesystem::path& dir, const Database& db);

} // namespace privalog
