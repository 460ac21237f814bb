#pragma once

#include <stdexcept>
#include <string>

#include "privalog/ast.hpp"

namespace privalog {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(l) + ":" + std::to_string(c) +
                             ": " + msg),
          line(l), col(c) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg)
        : std::runtime_error("validation error: " + msg) {}
};

/// Parses PrivaLog source text into a validated AST. The goal is desugared
/// (constants/@args become inputs, free variables become outputs, `_` become
/// unpublished fresh outputs); EDB-targeting or repeated-variable goals are
/// folded into a synthetic wrapper rule.
ProgramAst parse(const std::string& source);

/// Parse without validation/goal desugaring; used by the round-trip tests.
ProgramAst parse_raw(const std::string& source);

void validate(const ProgramAst& p);
void desugar_goal(ProgramAst& p);

std::string pretty_print(const ProgramAst& p);
std::string pretty_print(const Clause& c);
std::string pretty_print(const FormulaPtr& f);
std::string pretty_print(const TermPtr& t);

} // namespace privalog
