#pragma once

#include <stdexcept>

#include "privalog/core_ir.hpp"
#include "privalog/unfold.hpp"

namespace privalog {

struct CompileError : std::runtime_error {
    explicit CompileError(const std::string& msg)
        : std::runtime_error("compile error: " + msg) {}
};

/// Translates the inlined rulebase and goal into a core program: one function
/// per goal-matching rule (join of the referenced tables, per-literal
/// satisfiability bits, bit conjunction, multi-value return) plus a main that
/// reads arguments, concatenates rule outputs, shuffles, deduplicates,
/// declassifies and publishes (or folds a terminal aggregate under the mask).
ir::CoreProgram generate(const RuleBase& rb);

} // namespace privalog
