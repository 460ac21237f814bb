#pragma once

#include <set>
#include <string>

#include "privalog/ast.hpp"

namespace privalog {

/// Generates variable names that do not collide with any name already used
/// in the program. Shared by goal desugaring, head desugaring and unfolding.
class FreshNamer {
public:
    FreshNamer() = default;
    explicit FreshNamer(std::set<std::string> used) : used_(std::move(used)) {}

    void reserve(const std::string& name) { used_.insert(name); }

    std::string fresh(const std::string& stem = "V") {
        while (true) {
            std::string name = stem + "_" + std::to_string(counter_++);
            if (used_.insert(name).second) return name;
        }
    }

private:
    std::set<std::string> used_;
    long counter_ = 0;
};

std::set<std::string> all_program_vars(const ProgramAst& p);

} // namespace privalog
