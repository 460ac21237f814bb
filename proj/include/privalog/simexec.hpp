#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "privalog/core_ir.hpp"
#include "privalog/refeval.hpp"
#include "privalog/relation.hpp"

namespace privalog::sim {

struct RuntimeError : std::runtime_error {
    explicit RuntimeError(const std::string& msg) : std::runtime_error("runtime error: " + msg) {}
};

struct TypedCol {
    ir::Type type = ir::Type::Int;
    std::vector<int64_t> i;
    std::vector<double> f;
    std::vector<uint8_t> b;

    size_t size() const {
        switch (type) {
            case ir::Type::Int: return i.size();
            case ir::Type::Float: return f.size();
            case ir::Type::Bool: return b.size();
        }
        return 0;
    }
};

/// Observation log: what the computing parties see (declassify) and what the
/// client receives (publish). Append-only.
struct LeakEvent {
    enum class Kind { Declassify, Publish };
    Kind kind;
    std::string label; // publish label, empty for declassify
    TypedCol values;
};

struct RunResult {
    std::vector<std::pair<std::string, TypedCol>> published;
    std::vector<LeakEvent> leak;
};

/// Interprets the core program over the database: vectorized expression
/// semantics, fresh scope per function call, seeded uniform shuffle. The
/// opaque-value discipline is enforced (no private value may reach a
/// public-labeled variable except through declassify).
RunResult run(const ir::CoreProgram& prog, const Database& db, const ClientArgs& args,
              uint64_t seed);

std::string leak_to_json(const std::vector<LeakEvent>& leak);

/// Deterministic seeded uniform permutation of [0, n); exposed for the
/// shuffle-uniformity statistics.
std::vector<size_t> shuffle_permutation(uint64_t seed, size_t n, uint64_t stream = 0);

} // namespace privalog::sim
