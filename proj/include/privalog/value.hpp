#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "privalog/ast.hpp"

namespace privalog {

/// Runtime value of the reference evaluator. Garbage is the result of
/// invalid-input arithmetic (division by zero, sqrt of a negative); it is
/// absorbed by every comparison as false and never raises.
class Value {
public:
    enum class Kind { Int, Float, Str, Garbage };

    Value() : v_(int64_t{0}) {}
    static Value integer(int64_t i) { return Value(i); }
    static Value real(double d) { return Value(d); }
    static Value str(std::string s) { return Value(std::move(s)); }
    static Value garbage() {
        Value v;
        v.v_ = GarbageTag{};
        return v;
    }

    Kind kind() const {
        switch (v_.index()) {
            case 0: return Kind::Int;
            case 1: return Kind::Float;
            case 2: return Kind::Str;
            default: return Kind::Garbage;
        }
    }
    bool is_garbage() const { return kind() == Kind::Garbage; }
    bool is_numeric() const { return kind() == Kind::Int || kind() == Kind::Float; }

    int64_t as_int() const { return std::get<int64_t>(v_); }
    double as_float() const { return std::get<double>(v_); }
    const std::string& as_str() const { return std::get<std::string>(v_); }
    double to_double() const {
        return kind() == Kind::Int ? static_cast<double>(as_int()) : as_float();
    }

    // total order for set semantics; garbage sorts last, -0.0 == +0.0
    bool operator<(const Value& o) const;
    bool operator==(const Value& o) const;

    std::string repr() const;

private:
    struct GarbageTag {
        bool operator<(const GarbageTag&) const { return false; }
        bool operator==(const GarbageTag&) const { return true; }
    };
    explicit Value(int64_t i) : v_(i) {}
    explicit Value(double d) : v_(d) {}
    explicit Value(std::string s) : v_(std::move(s)) {}

    std::variant<int64_t, double, std::string, GarbageTag> v_;
};

/// Relative tolerance used by float equality (=:= and atom matching).
inline constexpr double kFloatEqTolerance = 1e-9;

/// The interpretation of arithmetic and comparison operators over Values.
/// int ⊕ int stays exact for + - * (wrapping); / and ^ are computed in
/// doubles; a non-finite result from finite inputs is Garbage.
Value apply_arith(ArithOp op, const Value& a, const Value& b);
Value apply_sqrt(const Value& a);
bool apply_cmp(CmpOp op, const Value& a, const Value& b);

bool float_eq(double a, double b);

} // namespace privalog
