#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "privalog/ast.hpp"

namespace privalog {

struct TransformError : std::runtime_error {
    explicit TransformError(const std::string& msg)
        : std::runtime_error("transform error: " + msg) {}
};

/// Program with goal-reachable IDB predicates renamed `p_<pattern>`,
/// pattern in {b,f}^arity. EDB predicates keep their names.
struct AdornedProgram {
    ProgramAst program;
    std::map<std::string, std::string> patterns; // adorned pred -> pattern
    std::vector<std::string> warnings;

    std::set<std::string> head_bound(const Clause& c) const;
};

/// Rewrites non-variable / repeated head arguments into fresh variables plus
/// body equations: ground arguments equate at the front of the body,
/// expression arguments at the back.
ProgramAst desugar_heads(const ProgramAst& p);

/// Bound/free labeling from the goal via left-to-right bound-set propagation;
/// renames IDB predicates per adornment pattern and drops unreachable rules.
AdornedProgram adorn(const ProgramAst& p);

/// Rewrites `=`/`is` into assignments (free LHS) or `=:=` comparisons (bound
/// operands); merges free-free unifications by renaming. Also rejects
/// non-ground comparisons, non-ground assignment RHS and unbound head outputs.
AdornedProgram split_eq(const AdornedProgram& p);

/// Order-preserving disjunctive normal form: one rule per branch, ground
/// disjunctions kept intact as single literals.
AdornedProgram to_ordered_dnf(const AdornedProgram& p);

/// DNF branches of one body given the initially bound variables; exposed for
/// the truth-table equivalence tests.
std::vector<std::vector<FormulaPtr>> dnf_branches(const FormulaPtr& body,
                                                  const std::set<std::string>& bound);

/// Re-classifies the `=`/`is` equations of one clause by boundness; used by
/// rewrites that introduce fresh equations (inlining, key merging).
Clause classify_equations(const Clause& c, const std::set<std::string>& head_bound);

/// B_0..B_k of one clause body: B_0 = initial, B_i = B_{i-1} ∪ vars(A_i).
std::vector<std::set<std::string>> bound_sets(const Clause& c,
                                              const std::set<std::string>& initial);

std::string goal_pattern(const Goal& g);

} // namespace privalog
