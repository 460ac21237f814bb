#pragma once

#include <string>
#include <vector>

#include "privalog/unfold.hpp"

namespace privalog {

enum class Sat { Satisfiable, Unsat, Unknown };

/// Best-effort arithmetic consistency of one inlined conjunctive body:
/// interval propagation over exact rationals plus equality substitution.
/// Unsat only on a proved contradiction; EDB atoms and unsupported
/// expressions are ignored (Unknown is the safe default).
Sat check_consistent(const std::vector<FormulaPtr>& body_literals);
Sat check_consistent(const Clause& rule);

/// Removes exactly the rules judged Unsat; removed rules are appended to
/// rb.pruned.
RuleBase prune_rulebase(RuleBase rb);

/// Merges duplicate EDB atoms sharing an identical primary-key term: the
/// second occurrence is replaced by pairwise column equalities. Applied
/// left-to-right until no match.
Clause merge_primary_keys(const Clause& rule, const std::vector<SchemaDecl>& schemas,
                          const std::set<std::string>& head_bound);

/// SMT-LIB2 rendering of the arithmetic constraints of one rule body, for an
/// external solver hook.
std::string to_smtlib(const Clause& rule);

} // namespace privalog
