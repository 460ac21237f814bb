#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace privalog {

enum class PrivacyType { Public, Private };
enum class DataType { Int, Float, String };

enum class ArithOp { Add, Sub, Mul, Div, Pow };

// Comparison / equation operators as they appear in source. Unify (=) and Is
// are rewritten by split_eq into Assign or Eq.
enum class CmpOp { Lt, Le, Eq, Ne, Ge, Gt, Unify, Is, Assign };

const char* to_string(ArithOp op);
const char* to_string(CmpOp op);
const char* to_string(PrivacyType p);
const char* to_string(DataType t);

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { Var, Hole, IntConst, FloatConst, StrConst, ClientArg, Bin, Sqrt };

    Kind kind;
    std::string name;   // Var, ClientArg
    int64_t ival = 0;   // IntConst
    double fval = 0.0;  // FloatConst
    std::string sval;   // StrConst
    ArithOp op = ArithOp::Add;
    TermPtr lhs, rhs;   // Bin; Sqrt uses lhs only

    static TermPtr var(std::string n);
    static TermPtr hole();
    static TermPtr int_const(int64_t v);
    static TermPtr float_const(double v);
    static TermPtr str_const(std::string v);
    static TermPtr client_arg(std::string n);
    static TermPtr bin(ArithOp o, TermPtr l, TermPtr r);
    static TermPtr sqrt(TermPtr t);

    bool is_var() const { return kind == Kind::Var; }
    bool is_const() const {
        return kind == Kind::IntConst || kind == Kind::FloatConst || kind == Kind::StrConst;
    }
};

bool term_equal(const TermPtr& a, const TermPtr& b);
void collect_vars(const TermPtr& t, std::set<std::string>& out);
std::set<std::string> term_vars(const TermPtr& t);
TermPtr substitute(const TermPtr& t, const std::string& var, const TermPtr& replacement);

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { True, False, Atom, Cmp, Not, And, Or };

    Kind kind;
    std::string pred;             // Atom
    std::vector<TermPtr> args;    // Atom
    CmpOp cmp = CmpOp::Eq;        // Cmp
    TermPtr lhs, rhs;             // Cmp
    FormulaPtr sub;               // Not
    std::vector<FormulaPtr> subs; // And / Or (n-ary)

    static FormulaPtr truth();
    static FormulaPtr falsity();
    static FormulaPtr atom(std::string p, std::vector<TermPtr> a);
    static FormulaPtr comparison(CmpOp op, TermPtr l, TermPtr r);
    static FormulaPtr negate(FormulaPtr f);
    static FormulaPtr conj(std::vector<FormulaPtr> fs);
    static FormulaPtr disj(std::vector<FormulaPtr> fs);
};

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);
void collect_vars(const FormulaPtr& f, std::set<std::string>& out);
std::set<std::string> formula_vars(const FormulaPtr& f);
FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const TermPtr& replacement);

// Flattens nested conjunctions into a literal list; True vanishes.
std::vector<FormulaPtr> conjuncts(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// Program structure
// ---------------------------------------------------------------------------

struct SchemaColumn {
    std::string name;
    PrivacyType ptype = PrivacyType::Public;
    DataType dtype = DataType::Int;
};

struct SchemaDecl {
    std::string pred;
    std::vector<SchemaColumn> columns;
    std::optional<int> primary_key; // column index
};

struct Clause {
    std::string head;
    std::vector<TermPtr> head_args;
    FormulaPtr body; // facts carry body = true
};

enum class AggKind { Min, Max, Sum, Count };
const char* to_string(AggKind k);

// A goal input is a target-arg position whose value is fixed by the query:
// either a literal constant written in the goal, or a client argument (@name
// or a Fig.3-style input variable) supplied at run time.
struct GoalInput {
    int pos = 0;
    bool is_client_arg = false;
    std::string arg_name; // client argument key
    TermPtr value;        // constant when !is_client_arg
};

struct GoalOutput {
    int pos = 0;
    std::string var;
    bool published = true; // holes participate in the answer set but are not published
};

struct Aggregation {
    AggKind kind = AggKind::Min;
    std::string over_var;
    std::string result_var;
};

struct Goal {
    std::string target;
    std::vector<TermPtr> target_args;
    std::vector<GoalInput> inputs;
    std::vector<GoalOutput> outputs;
    std::optional<Aggregation> aggregation;
};

struct ProgramAst {
    std::vector<SchemaDecl> schemas;
    std::vector<Clause> clauses;
    Goal goal;

    const SchemaDecl* find_schema(const std::string& pred) const;
    bool is_edb(const std::string& pred) const { return find_schema(pred) != nullptr; }
    bool has_rules(const std::string& pred) const;
};

} // namespace privalog
