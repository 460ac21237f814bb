#pragma once

#include <cstdint>
#include <string>

#include "privalog/refeval.hpp"
#include "privalog/relation.hpp"

namespace privalog {

/// One generated differential-testing fixture: random stratified,
/// range-restricted, semipositive program over small integer tables, with an
/// optional negated EDB atom and optional terminal aggregation.
struct CorpusFixture {
    std::string source;
    Database db;
    ClientArgs args;
};

CorpusFixture generate_fixture(uint64_t seed);

/// Fresh random tables for an existing fixture's schemas (pruning-soundness
/// checks run pruned rules against many databases).
Database random_database_for(const CorpusFixture& fixture, uint64_t seed);

} // namespace privalog
