#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "privalog/ast.hpp"
#include "privalog/relation.hpp"

namespace privalog {

struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& msg) : std::runtime_error("eval error: " + msg) {}
};

using ClientArgs = std::map<std::string, Value>;

/// Goal answers: the full solution relation over every free target argument
/// (holes included), plus the terminal aggregate when the goal has one.
struct Answer {
    std::vector<std::string> columns;
    std::vector<bool> published;
    std::set<std::vector<Value>> rows;
    std::optional<Value> aggregate;
    bool empty_aggregate = false; // min/max over an empty answer set
    bool fixpoint = true;         // false when the iteration bound was hit

    std::set<std::vector<Value>> published_rows() const;
};

using Env = std::map<std::string, Value>;

/// Term semantics under a row binding; unbound variable -> EvalError,
/// invalid arithmetic -> Garbage.
Value eval_term(const TermPtr& t, const Env& row);

/// Evaluates one rule body left-to-right over the given relations
/// (EDB tables plus current IDB relations); result is the projection onto
/// the head arguments, deduplicated.
Relation eval_rule(const Clause& rule, const Database& db,
                   const std::map<std::string, Relation>& idb, const Env& input_bindings);

/// Bottom-up naive iteration from empty IDB relations, then goal selection,
/// projection and terminal aggregation.
Answer eval_program(const ProgramAst& p, const Database& db, const ClientArgs& args,
                    int max_iter = 10);

/// Direct goal evaluation over IDB-free rules (an unfolded rulebase): each
/// goal rule is evaluated with the goal inputs bound, no iteration.
Answer eval_goal_rules(const std::vector<Clause>& goal_rules, const Goal& goal,
                       const Database& db, const ClientArgs& args);

Value aggregate(const std::set<std::vector<Value>>& rows, size_t column, AggKind kind,
                bool& empty_out);

} // namespace privalog
