#include <cmath>
#include <sstream>

#include "privalog/value.hpp"

namespace privalog {

namespace {

double canonical(double d) { return d == 0.0 ? 0.0 : d; }

} // namespace

bool Value::operator<(const Value& o) const {
    Kind ka = kind(), kb = o.kind();
    bool na = ka == Kind::Int || ka == Kind::Float;
    bool nb = kb == Kind::Int || kb == Kind::Float;
    if (na && nb) {
        if (ka == Kind::Int && kb == Kind::Int) return as_int() < o.as_int();
        double da = canonical(to_double()), db = canonical(o.to_double());
        if (da != db) return da < db;
        // keep int 1 and float 1.0 distinct in sets
        return static_cast<int>(ka) < static_cast<int>(kb);
    }
    if (static_cast<int>(ka) != static_cast<int>(kb))
        return static_cast<int>(ka) < static_cast<int>(kb);
    if (ka == Kind::Str) return as_str() < o.as_str();
    return false; // two garbage values are equal
}

bool Value::operator==(const Value& o) const { return !(*this < o) && !(o < *this); }

std::string Value::repr() const {
    std::ostringstream os;
    switch (kind()) {
        case Kind::Int: os << as_int(); break;
        case Kind::Float: os << as_float(); break;
        case Kind::Str: os << '\'' << as_str() << '\''; break;
        case Kind::Garbage: os << "<garbage>"; break;
    }
    return os.str();
}

bool float_eq(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return false;
    if (a == b) return true;
    double scale = std::max(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) <= kFloatEqTolerance * scale;
}

namespace {

Value float_result(double d, bool inputs_finite) {
    if (inputs_finite && !std::isfinite(d)) return Value::garbage();
    if (std::isnan(d)) return Value::garbage();
    return Value::real(d);
}

} // namespace

Value apply_arith(ArithOp op, const Value& a, const Value& b) {
    if (a.is_garbage() || b.is_garbage()) return Value::garbage();
    if (!a.is_numeric() || !b.is_numeric()) return Value::garbage();
    bool both_int = a.kind() == Value::Kind::Int && b.kind() == Value::Kind::Int;
    switch (op) {
        case ArithOp::Add:
            if (both_int) return Value::integer(static_cast<int64_t>(
                static_cast<uint64_t>(a.as_int()) + static_cast<uint64_t>(b.as_int())));
            return float_result(a.to_double() + b.to_double(), true);
        case ArithOp::Sub:
            if (both_int) return Value::integer(static_cast<int64_t>(
                static_cast<uint64_t>(a.as_int()) - static_cast<uint64_t>(b.as_int())));
            return float_result(a.to_double() - b.to_double(), true);
        case ArithOp::Mul:
            if (both_int) return Value::integer(static_cast<int64_t>(
                static_cast<uint64_t>(a.as_int()) * static_cast<uint64_t>(b.as_int())));
            return float_result(a.to_double() * b.to_double(), true);
        case ArithOp::Div: {
            double db = b.to_double();
            if (db == 0.0) return Value::garbage();
            return float_result(a.to_double() / db, true);
        }
        case ArithOp::Pow:
            return float_result(std::pow(a.to_double(), b.to_double()), true);
    }
    return Value::garbage();
}

Value apply_sqrt(const Value& a) {
    if (!a.is_numeric()) return Value::garbage();
    double d = a.to_double();
    if (d < 0.0) return Value::garbage();
    return float_result(std::sqrt(d), true);
}

bool apply_cmp(CmpOp op, const Value& a, const Value& b) {
    if (a.is_garbage() || b.is_garbage()) return false;
    bool str_a = a.kind() == Value::Kind::Str;
    bool str_b = b.kind() == Value::Kind::Str;
    if (str_a || str_b) {
        if (!(str_a && str_b)) return op == CmpOp::Ne; // type mismatch: never equal
        switch (op) {
            case CmpOp::Eq: return a.as_str() == b.as_str();
            case CmpOp::Ne: return a.as_str() != b.as_str();
            default: return false; // ordering on strings is unsupported
        }
    }
    if (a.kind() == Value::Kind::Int && b.kind() == Value::Kind::Int) {
        int64_t x = a.as_int(), y = b.as_int();
        switch (op) {
            case CmpOp::Lt: return x < y;
            case CmpOp::Le: return x <= y;
            case CmpOp::Eq: return x == y;
            case CmpOp::Ne: return x != y;
            case CmpOp::Ge: return x >= y;
            case CmpOp::Gt: return x > y;
            default: return false;
        }
    }
    double x = a.to_double(), y = b.to_double();
    switch (op) {
        case CmpOp::Lt: return x < y;
        case CmpOp::Le: return x <= y;
        case CmpOp::Eq: return float_eq(x, y);
        case CmpOp::Ne: return !float_eq(x, y);
        case CmpOp::Ge: return x >= y;
        case CmpOp::Gt: return x > y;
        default: return false;
    }
}

} // namespace privalog
