#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "privalog/names.hpp"
#include "privalog/transform.hpp"

namespace privalog {

/// Inlined (IDB-free) rules per adorned predicate, produced by the symbolic
/// bottom-up rulebase iteration. EDB schema declarations enter as trivial
/// `p(x1..xk) :- true` rules; they are never inlined into bodies.
struct RuleBase {
    std::map<std::string, std::vector<Clause>> rules;
    std::vector<Clause> edb_trivial;
    std::vector<Clause> pruned; // rules discarded as unsatisfiable
    std::map<std::string, std::string> patterns;
    std::vector<SchemaDecl> schemas;
    Goal goal;
    int iterations = 0;   // productive rulebase applications
    bool fixpoint = false;
    std::vector<std::string> warnings;

    const std::vector<Clause>& goal_rules() const {
        static const std::vector<Clause> empty;
        auto it = rules.find(goal.target);
        return it == rules.end() ? empty : it->second;
    }
};

struct UnfoldOptions {
    int max_iter = 10;
    bool prune = true;
    size_t max_rules = 20000; // hard cap against rulebase explosion
};

RuleBase unfold_program(const AdornedProgram& p, const UnfoldOptions& opts = {});

/// One body expansion against a rulebase: every IDB atom is replaced by each
/// of its inlined rules (bound head positions substituted by the caller's
/// terms, free positions equated after the spliced body). Returns the branch
/// bodies as literal lists; an IDB atom with no rules yields no branches.
/// `branch_cap` bounds the combination blowup; overflowing branches are
/// dropped (a sound under-approximation, like the iteration bound) and
/// `truncated` is set when given.
std::vector<std::vector<FormulaPtr>> unfold_body(const std::vector<FormulaPtr>& lits,
                                                 const std::set<std::string>& bound,
                                                 const RuleBase& rb, FreshNamer& namer,
                                                 size_t branch_cap = SIZE_MAX,
                                                 bool* truncated = nullptr);

/// Copy propagation + constant folding; returns nothing when a literal folds
/// to false (the rule is trivially unsatisfiable).
std::optional<Clause> simplify_rule(const Clause& c);

/// Canonical form for structural-equality-modulo-renaming: variables renamed
/// v0,v1,... in first-occurrence order, serialized as text.
std::string canonical_key(const Clause& c);

} // namespace privalog
