#pragma once

#include <optional>
#include <string>

#include "privalog/codegen.hpp"
#include "privalog/refeval.hpp"
#include "privalog/simexec.hpp"
#include "privalog/transform.hpp"
#include "privalog/unfold.hpp"

namespace privalog {

struct CompileOptions {
    int max_unfold = 10;
    bool prune = true;
};

/// All pipeline stages, kept for the pass-dump flags and the stage-invariance
/// tests.
struct CompileResult {
    ProgramAst parsed;       // validated, goal desugared
    ProgramAst desugared;    // heads rewritten to distinct variables
    AdornedProgram adorned;  // renamed + =/is split
    AdornedProgram dnf;      // one rule per branch
    RuleBase rulebase;       // inlined, pruned, keys merged
    ir::CoreProgram program;
};

CompileResult compile(const std::string& source, const CompileOptions& opts = {});

/// Reference answers for a compiled program: bottom-up evaluation of the
/// source program when it is evaluable that way, otherwise direct evaluation
/// of the inlined rulebase under the goal bindings (recursive programs).
Answer reference_answers(const CompileResult& c, const Database& db, const ClientArgs& args,
                         int max_iter = 10);

struct CheckReport {
    bool pass = false;
    std::string detail; // human-readable diff on failure
};

/// Compiles, runs the simulated backend, runs the reference evaluator and
/// compares published sets (exact for ints and string hashes, 1e-9 relative
/// for floats; aggregates compared the same way).
CheckReport check(const CompileResult& c, const Database& db, const ClientArgs& args,
                  uint64_t seed);

/// Published simexec rows as value tuples over the published output columns
/// (string columns remain CRC32 hashes).
std::set<std::vector<Value>> published_set(const sim::RunResult& run);

/// Reference rows made comparable with simexec output: strings hashed,
/// garbage mapped to the same marker.
std::set<std::vector<Value>> comparable_reference(const Answer& ans);

bool rows_match(const std::set<std::vector<Value>>& sim_rows,
                const std::set<std::vector<Value>>& ref_rows);

} // namespace privalog
