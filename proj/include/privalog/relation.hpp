#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "privalog/ast.hpp"
#include "privalog/value.hpp"

namespace privalog {

/// Finite relation with set semantics; attribute order matters, row order
/// does not.
struct Relation {
    size_t arity = 0;
    std::vector<std::string> attrs; // may be empty when unnamed
    std::set<std::vector<Value>> rows;

    bool contains(const std::vector<Value>& row) const { return rows.count(row) != 0; }
};

/// An EDB table: schema-typed rows in a stable order (the vectorized runtime
/// depends on deterministic row order); string columns carry precomputed
/// CRC32 shadow values.
struct Table {
    SchemaDecl schema;
    std::vector<std::vector<Value>> rows;
    std::vector<std::vector<int64_t>> hash_columns; // per column; empty unless string

    void finalize(); // dedupe rows (keep first) and fill hash columns
};

struct Database {
    std::map<std::string, Table> tables;

    const Table& at(const std::string& name) const {
        auto it = tables.find(name);
        if (it == tables.end()) throw std::runtime_error("unknown table " + name);
        return it->second;
    }
};

} // namespace privalog
