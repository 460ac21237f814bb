#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_set>

#include <json.hpp>

#include "privalog/crc32.hpp"
#include "privalog/kernels.hpp"
#include "privalog/simexec.hpp"

namespace privalog::sim {

namespace {

namespace k = privalog::kernels;
using ir::Dom;
using ir::Expr;
using ir::ExprPtr;
using ir::Stmt;
using ir::Type;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SplitMix64 {
    uint64_t s;
    uint64_t next() {
        uint64_t z = (s += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

struct Vec {
    Dom dom = Dom::Public;
    TypedCol col;
};

TypedCol broadcast(const TypedCol& c, size_t n) {
    if (c.size() == n) return c;
    if (c.size() != 1) throw RuntimeError("vector length mismatch: have " +
                                          std::to_string(c.size()) + ", need " +
                                          std::to_string(n));
    TypedCol out;
    out.type = c.type;
    switch (c.type) {
        case Type::Int: out.i.assign(n, c.i[0]); break;
        case Type::Float: out.f.assign(n, c.f[0]); break;
        case Type::Bool: out.b.assign(n, c.b[0]); break;
    }
    return out;
}

// scalars (length 1) stretch to the other operand's length, including zero
size_t common_length(const TypedCol& a, const TypedCol& b) {
    if (a.size() == b.size()) return a.size();
    if (a.size() == 1) return b.size();
    if (b.size() == 1) return a.size();
    throw RuntimeError("vector length mismatch: " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
}

// canonical bytes for dedup keys: -0.0 folds to +0.0, NaN to one pattern
void append_key_bytes(std::string& key, const TypedCol& c, size_t row) {
    switch (c.type) {
        case Type::Int: {
            int64_t v = c.i[row];
            key.append(reinterpret_cast<const char*>(&v), sizeof v);
            break;
        }
        case Type::Float: {
            double v = c.f[row];
            if (v == 0.0) v = 0.0;
            if (std::isnan(v)) v = kNaN;
            key.append(reinterpret_cast<const char*>(&v), sizeof v);
            break;
        }
        case Type::Bool: key.push_back(static_cast<char>(c.b[row])); break;
    }
}

struct Machine {
    const ir::CoreProgram& prog;
    const Database& db;
    const ClientArgs& args;
    SplitMix64 rng;
    std::vector<LeakEvent> leak;
    std::vector<std::pair<std::string, TypedCol>> published;

    struct Scope {
        std::map<std::string, ir::Decl> decls;
        std::map<std::string, Vec> vars;
        // join column groups: per group, per column, the cross-product vector
        std::map<std::string, std::vector<Vec>> groups;
        size_t width = 1; // vector length of the enclosing cross product
    };

    const ir::Function& function(const std::string& name) const {
        for (const auto& f : prog.functions)
            if (f.name == name) return f;
        throw RuntimeError("unknown function " + name);
    }

    const Table& table(const std::string& name) const {
        auto it = db.tables.find(name);
        if (it == db.tables.end()) throw RuntimeError("unknown table " + name);
        return it->second;
    }

    // table column as a typed vector (string columns read the hash shadow)
    static Vec table_column(const Table& t, size_t c) {
        Vec out;
        const SchemaColumn& col = t.schema.columns[c];
        out.dom = col.ptype == PrivacyType::Private ? Dom::Private : Dom::Public;
        switch (col.dtype) {
            case DataType::Int:
                out.col.type = Type::Int;
                out.col.i.reserve(t.rows.size());
                for (const auto& r : t.rows) out.col.i.push_back(r[c].as_int());
                break;
            case DataType::Float:
                out.col.type = Type::Float;
                out.col.f.reserve(t.rows.size());
                for (const auto& r : t.rows) out.col.f.push_back(r[c].to_double());
                break;
            case DataType::String:
                out.col.type = Type::Int;
                out.col.i = t.hash_columns[c];
                break;
        }
        return out;
    }

    Vec eval(const ExprPtr& e, Scope& sc) {
        switch (e->kind) {
            case Expr::Kind::Var: {
                auto it = sc.vars.find(e->name);
                if (it == sc.vars.end()) throw RuntimeError("unbound variable " + e->name);
                return it->second;
            }
            case Expr::Kind::ConstInt: {
                Vec v;
                v.col.type = Type::Int;
                v.col.i = {e->ival};
                return v;
            }
            case Expr::Kind::ConstFloat: {
                Vec v;
                v.col.type = Type::Float;
                v.col.f = {e->fval};
                return v;
            }
            case Expr::Kind::ConstStr: {
                Vec v;
                v.col.type = Type::Int;
                v.col.i = {static_cast<int64_t>(crc32(e->sval))};
                return v;
            }
            case Expr::Kind::ConstBool: {
                Vec v;
                v.col.type = Type::Bool;
                v.col.b = {static_cast<uint8_t>(e->bval ? 1 : 0)};
                return v;
            }
            case Expr::Kind::Column: {
                auto it = sc.groups.find(e->name);
                if (it == sc.groups.end()) throw RuntimeError("column read before join");
                return it->second.at(static_cast<size_t>(e->col));
            }
            case Expr::Kind::Not: {
                Vec a = eval(e->args[0], sc);
                Vec out;
                out.dom = a.dom;
                out.col.type = Type::Bool;
                out.col.b.resize(a.col.b.size());
                k::active_ops().not_u8(a.col.b.data(), out.col.b.data(), a.col.b.size());
                return out;
            }
            case Expr::Kind::Bin: return eval_bin(e, sc);
            case Expr::Kind::Cmp: return eval_cmp(e, sc);
            case Expr::Kind::Sqrt: {
                Vec a = eval(e->args[0], sc);
                Vec out;
                out.dom = a.dom;
                out.col.type = Type::Float;
                out.col.f.resize(a.col.f.size());
                k::active_ops().sqrt_f64(a.col.f.data(), out.col.f.data(), a.col.f.size());
                return out;
            }
            case Expr::Kind::ToFloat: {
                Vec a = eval(e->args[0], sc);
                Vec out;
                out.dom = a.dom;
                out.col.type = Type::Float;
                out.col.f.resize(a.col.i.size());
                k::i64_to_f64(a.col.i.data(), out.col.f.data(), a.col.i.size());
                return out;
            }
            case Expr::Kind::In: return eval_in(e, sc);
            case Expr::Kind::Declassify: {
                Vec a = eval(e->args[0], sc);
                leak.push_back({LeakEvent::Kind::Declassify, "", a.col});
                a.dom = Dom::Public;
                return a;
            }
            case Expr::Kind::Argument: return eval_argument(e);
            case Expr::Kind::Concat: {
                Vec out;
                bool first = true;
                for (const auto& part : e->args) {
                    Vec p = eval(part, sc);
                    if (first) {
                        out = std::move(p);
                        first = false;
                        continue;
                    }
                    if (p.col.type != out.col.type) throw RuntimeError("concat type mismatch");
                    out.dom = ir::join_dom(out.dom, p.dom);
                    out.col.i.insert(out.col.i.end(), p.col.i.begin(), p.col.i.end());
                    out.col.f.insert(out.col.f.end(), p.col.f.begin(), p.col.f.end());
                    out.col.b.insert(out.col.b.end(), p.col.b.begin(), p.col.b.end());
                }
                if (first) out.col.type = Type::Bool; // empty concat: typed by context
                return out;
            }
            case Expr::Kind::Unique: return eval_unique(e, sc);
            case Expr::Kind::Fold: return eval_fold(e, sc);
            case Expr::Kind::Filter: return eval_filter(e, sc);
        }
        throw RuntimeError("bad expression");
    }

    Vec eval_bin(const ExprPtr& e, Scope& sc) {
        Vec a = eval(e->args[0], sc);
        Vec b = eval(e->args[1], sc);
        size_t n = common_length(a.col, b.col);
        a.col = broadcast(a.col, n);
        b.col = broadcast(b.col, n);
        Vec out;
        out.dom = ir::join_dom(a.dom, b.dom);
        const k::Ops& ops = k::active_ops();
        switch (e->bin) {
            case ir::BinOp::And:
            case ir::BinOp::Or: {
                out.col.type = Type::Bool;
                out.col.b.resize(n);
                auto fn = e->bin == ir::BinOp::And ? ops.and_u8 : ops.or_u8;
                fn(a.col.b.data(), b.col.b.data(), out.col.b.data(), n);
                return out;
            }
            case ir::BinOp::Div: {
                out.col.type = Type::Float;
                out.col.f.resize(n);
                ops.div_f64(a.col.f.data(), b.col.f.data(), out.col.f.data(), n);
                return out;
            }
            case ir::BinOp::Pow: {
                out.col.type = Type::Float;
                out.col.f.resize(n);
                k::pow_f64(a.col.f.data(), b.col.f.data(), out.col.f.data(), n);
                return out;
            }
            default: {
                if (a.col.type != b.col.type) throw RuntimeError("arith type mismatch");
                out.col.type = a.col.type;
                if (a.col.type == Type::Int) {
                    out.col.i.resize(n);
                    auto fn = e->bin == ir::BinOp::Add   ? ops.add_i64
                              : e->bin == ir::BinOp::Sub ? ops.sub_i64
                                                         : ops.mul_i64;
                    fn(a.col.i.data(), b.col.i.data(), out.col.i.data(), n);
                } else {
                    out.col.f.resize(n);
                    auto fn = e->bin == ir::BinOp::Add   ? ops.add_f64
                              : e->bin == ir::BinOp::Sub ? ops.sub_f64
                                                         : ops.mul_f64;
                    fn(a.col.f.data(), b.col.f.data(), out.col.f.data(), n);
                }
                return out;
            }
        }
    }

    Vec eval_cmp(const ExprPtr& e, Scope& sc) {
        Vec a = eval(e->args[0], sc);
        Vec b = eval(e->args[1], sc);
        if (a.col.type != b.col.type) throw RuntimeError("comparison type mismatch");
        size_t n = common_length(a.col, b.col);
        a.col = broadcast(a.col, n);
        b.col = broadcast(b.col, n);
        Vec out;
        out.dom = ir::join_dom(a.dom, b.dom);
        out.col.type = Type::Bool;
        out.col.b.resize(n);
        const k::Ops& ops = k::active_ops();
        if (a.col.type == Type::Int) {
            auto fn = e->rel == ir::RelOp::Lt   ? ops.lt_i64
                      : e->rel == ir::RelOp::Le ? ops.le_i64
                      : e->rel == ir::RelOp::Eq ? ops.eq_i64
                      : e->rel == ir::RelOp::Ne ? ops.ne_i64
                      : e->rel == ir::RelOp::Ge ? ops.ge_i64
                                                : ops.gt_i64;
            fn(a.col.i.data(), b.col.i.data(), out.col.b.data(), n);
        } else if (a.col.type == Type::Float) {
            auto fn = e->rel == ir::RelOp::Lt   ? ops.lt_f64
                      : e->rel == ir::RelOp::Le ? ops.le_f64
                      : e->rel == ir::RelOp::Eq ? ops.eq_f64
                      : e->rel == ir::RelOp::Ne ? ops.ne_f64
                      : e->rel == ir::RelOp::Ge ? ops.ge_f64
                                                : ops.gt_f64;
            fn(a.col.f.data(), b.col.f.data(), out.col.b.data(), n);
        } else {
            throw RuntimeError("comparison on booleans");
        }
        return out;
    }

    Vec eval_in(const ExprPtr& e, Scope& sc) {
        const Table& t = table(e->name);
        std::vector<Vec> keys;
        size_t n = 1;
        for (const auto& a : e->args) {
            keys.push_back(eval(a, sc));
            size_t len = keys.back().col.size();
            if (len != 1) {
                if (n != 1 && n != len) throw RuntimeError("in: key length mismatch");
                n = len;
            }
        }
        Dom dom = Dom::Public;
        for (auto& kv : keys) {
            kv.col = broadcast(kv.col, n);
            dom = ir::join_dom(dom, kv.dom);
        }
        for (const auto& c : t.schema.columns)
            if (c.ptype == PrivacyType::Private) dom = Dom::Private;

        Vec out;
        out.dom = dom;
        out.col.type = Type::Bool;
        out.col.b.assign(n, 0);
        const k::Ops& ops = k::active_ops();
        std::vector<uint8_t> row_match(n), col_match(n);
        for (size_t r = 0; r < t.rows.size(); ++r) {
            std::fill(row_match.begin(), row_match.end(), 1);
            for (size_t c = 0; c < keys.size(); ++c) {
                const Vec& key = keys[c];
                if (key.col.type == Type::Int) {
                    int64_t cell = t.schema.columns[c].dtype == DataType::String
                                       ? t.hash_columns[c][r]
                                       : t.rows[r][c].as_int();
                    std::vector<int64_t> cv(n, cell);
                    ops.eq_i64(key.col.i.data(), cv.data(), col_match.data(), n);
                } else {
                    std::vector<double> cv(n, t.rows[r][c].to_double());
                    ops.eq_f64(key.col.f.data(), cv.data(), col_match.data(), n);
                }
                ops.and_u8(row_match.data(), col_match.data(), row_match.data(), n);
            }
            ops.or_u8(out.col.b.data(), row_match.data(), out.col.b.data(), n);
        }
        return out;
    }

    Vec eval_argument(const ExprPtr& e) {
        auto it = args.find(e->name);
        if (it == args.end()) throw RuntimeError("missing client argument " + e->name);
        const Value& v = it->second;
        Vec out;
        switch (e->arg_kind) {
            case ir::ArgKind::Str:
                if (v.kind() != Value::Kind::Str)
                    throw RuntimeError("argument " + e->name + " must be a string");
                out.col.type = Type::Int;
                out.col.i = {static_cast<int64_t>(crc32(v.as_str()))};
                break;
            case ir::ArgKind::Int:
                if (v.kind() != Value::Kind::Int)
                    throw RuntimeError("argument " + e->name + " must be an int");
                out.col.type = Type::Int;
                out.col.i = {v.as_int()};
                break;
            case ir::ArgKind::Float:
                if (!v.is_numeric()) throw RuntimeError("argument " + e->name + " must be numeric");
                out.col.type = Type::Float;
                out.col.f = {v.to_double()};
                break;
        }
        return out;
    }

    Vec eval_unique(const ExprPtr& e, Scope& sc) {
        std::vector<Vec> cols;
        size_t n = 0;
        for (const auto& a : e->args) {
            cols.push_back(eval(a, sc));
            n = cols.back().col.size();
        }
        for (const auto& c : cols)
            if (c.col.size() != n) throw RuntimeError("unique length mismatch");
        const Vec& bits = cols[0];
        Vec out;
        out.dom = Dom::Public;
        for (const auto& c : cols) out.dom = ir::join_dom(out.dom, c.dom);
        out.col.type = Type::Bool;
        out.col.b.resize(n);
        std::unordered_set<std::string> seen;
        for (size_t row = 0; row < n; ++row) {
            std::string key;
            for (const auto& c : cols) append_key_bytes(key, c.col, row);
            bool first = seen.insert(std::move(key)).second;
            out.col.b[row] = bits.col.b[row] & (first ? 1 : 0);
        }
        return out;
    }

    Vec eval_fold(const ExprPtr& e, Scope& sc) {
        Vec v = eval(e->args[0], sc);
        Vec bits = eval(e->args[1], sc);
        size_t n = bits.col.b.size();
        if (e->fold != ir::FoldKind::Count && v.col.size() != n)
            throw RuntimeError("fold length mismatch");
        Vec out;
        out.dom = ir::join_dom(v.dom, bits.dom);
        switch (e->fold) {
            case ir::FoldKind::Count:
                out.col.type = Type::Int;
                out.col.i = {static_cast<int64_t>(k::popcount_u8(bits.col.b.data(), n))};
                return out;
            case ir::FoldKind::Sum:
                out.col.type = v.col.type;
                if (v.col.type == Type::Int)
                    out.col.i = {k::sum_masked_i64(v.col.i.data(), bits.col.b.data(), n)};
                else
                    out.col.f = {k::sum_masked_f64(v.col.f.data(), bits.col.b.data(), n)};
                return out;
            case ir::FoldKind::Min:
                out.col.type = v.col.type;
                if (v.col.type == Type::Int)
                    out.col.i = {k::min_masked_i64(v.col.i.data(), bits.col.b.data(), n)};
                else
                    out.col.f = {k::min_masked_f64(v.col.f.data(), bits.col.b.data(), n)};
                return out;
            case ir::FoldKind::Max:
                out.col.type = v.col.type;
                if (v.col.type == Type::Int)
                    out.col.i = {k::max_masked_i64(v.col.i.data(), bits.col.b.data(), n)};
                else
                    out.col.f = {k::max_masked_f64(v.col.f.data(), bits.col.b.data(), n)};
                return out;
        }
        throw RuntimeError("bad fold");
    }

    Vec eval_filter(const ExprPtr& e, Scope& sc) {
        Vec v = eval(e->args[0], sc);
        Vec bits = eval(e->args[1], sc);
        if (bits.dom == Dom::Private) throw RuntimeError("filter by private bits");
        if (v.col.size() != bits.col.b.size()) throw RuntimeError("filter length mismatch");
        Vec out;
        out.dom = v.dom;
        out.col.type = v.col.type;
        for (size_t row = 0; row < bits.col.b.size(); ++row) {
            if (!bits.col.b[row]) continue;
            switch (v.col.type) {
                case Type::Int: out.col.i.push_back(v.col.i[row]); break;
                case Type::Float: out.col.f.push_back(v.col.f[row]); break;
                case Type::Bool: out.col.b.push_back(v.col.b[row]); break;
            }
        }
        return out;
    }

    void exec(const std::vector<Stmt>& body, Scope& sc) {
        for (const auto& s : body) {
            switch (s.kind) {
                case Stmt::Kind::Decl: sc.decls[s.decl.name] = s.decl; break;
                case Stmt::Kind::Assign: {
                    auto it = sc.decls.find(s.target);
                    if (it == sc.decls.end())
                        throw RuntimeError("assignment to undeclared " + s.target);
                    Vec v = eval(s.expr, sc);
                    if (v.dom == Dom::Private && it->second.dom == Dom::Public)
                        throw RuntimeError("private value assigned to public " + s.target);
                    v.dom = it->second.dom;
                    if (v.col.size() == 0) v.col.type = it->second.type; // empty concat
                    if (v.col.type != it->second.type)
                        throw RuntimeError("type mismatch assigning " + s.target);
                    sc.vars[s.target] = std::move(v);
                    break;
                }
                case Stmt::Kind::Join: {
                    std::vector<const Table*> ts;
                    size_t m = 1;
                    for (const auto& name : s.tables) {
                        ts.push_back(&table(name));
                        m *= ts.back()->rows.size();
                    }
                    sc.width = m;
                    // cross product, row-major with the rightmost table fastest
                    size_t stride = m;
                    for (size_t j = 0; j < ts.size(); ++j) {
                        size_t rows = ts[j]->rows.size();
                        stride = rows == 0 ? 0 : stride / rows;
                        std::vector<Vec> cols;
                        for (size_t c = 0; c < ts[j]->schema.columns.size(); ++c) {
                            Vec base = table_column(*ts[j], c);
                            Vec expanded;
                            expanded.dom = base.dom;
                            expanded.col.type = base.col.type;
                            for (size_t u = 0; u < m; ++u) {
                                size_t idx = rows == 0 ? 0 : (u / stride) % rows;
                                if (base.col.type == Type::Int)
                                    expanded.col.i.push_back(base.col.i[idx]);
                                else
                                    expanded.col.f.push_back(base.col.f[idx]);
                            }
                            cols.push_back(std::move(expanded));
                        }
                        sc.groups[s.targets[j]] = std::move(cols);
                    }
                    // parameters observed so far are scaled to the width
                    for (auto& [name, v] : sc.vars) v.col = broadcast(v.col, m);
                    break;
                }
                case Stmt::Kind::Call: {
                    const ir::Function& fn = function(s.func);
                    Scope inner;
                    for (size_t i = 0; i < fn.params.size(); ++i) {
                        Vec v = eval(s.args[i], sc);
                        v.dom = fn.params[i].dom;
                        inner.decls[fn.params[i].name] = fn.params[i];
                        inner.vars[fn.params[i].name] = std::move(v);
                    }
                    exec(fn.body, inner);
                    for (size_t i = 0; i < fn.returns.size(); ++i) {
                        auto it = inner.vars.find(fn.returns[i].name);
                        if (it == inner.vars.end())
                            throw RuntimeError("function " + fn.name + " did not bind return " +
                                               fn.returns[i].name);
                        Vec v = it->second;
                        v.col = broadcast(v.col, inner.width);
                        sc.decls[s.targets[i]] = {s.targets[i], v.dom, v.col.type};
                        sc.vars[s.targets[i]] = std::move(v);
                    }
                    break;
                }
                case Stmt::Kind::Shuffle: {
                    size_t n = 0;
                    bool have = false;
                    for (const auto& src : s.sources) {
                        size_t len = sc.vars.at(src).col.size();
                        if (have && len != n) throw RuntimeError("joint shuffle length mismatch");
                        n = len;
                        have = true;
                    }
                    std::vector<size_t> perm = shuffle_permutation(rng.next(), n);
                    for (size_t i = 0; i < s.sources.size(); ++i) {
                        const Vec& src = sc.vars.at(s.sources[i]);
                        Vec dst;
                        dst.dom = src.dom;
                        dst.col.type = src.col.type;
                        for (size_t u = 0; u < n; ++u) {
                            switch (src.col.type) {
                                case Type::Int: dst.col.i.push_back(src.col.i[perm[u]]); break;
                                case Type::Float: dst.col.f.push_back(src.col.f[perm[u]]); break;
                                case Type::Bool: dst.col.b.push_back(src.col.b[perm[u]]); break;
                            }
                        }
                        sc.decls[s.targets[i]] = {s.targets[i], dst.dom, dst.col.type};
                        sc.vars[s.targets[i]] = std::move(dst);
                    }
                    break;
                }
                case Stmt::Kind::Publish: {
                    Vec v = eval(s.expr, sc);
                    leak.push_back({LeakEvent::Kind::Publish, s.label, v.col});
                    published.emplace_back(s.label, v.col);
                    break;
                }
            }
        }
    }
};

} // namespace

std::vector<size_t> shuffle_permutation(uint64_t seed, size_t n, uint64_t stream) {
    SplitMix64 rng{seed ^ (0x51ED270EULL + stream * 0x9E3779B97F4A7C15ull)};
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    for (size_t i = n; i > 1; --i) {
        size_t j = static_cast<size_t>(rng.next() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

RunResult run(const ir::CoreProgram& prog, const Database& db, const ClientArgs& args,
              uint64_t seed) {
    // schema agreement between the program and the loaded database
    for (const auto& t : prog.tables) {
        const Table& loaded = db.at(t.pred);
        if (loaded.schema.columns.size() != t.columns.size())
            throw RuntimeError("arity mismatch for table " + t.pred);
        for (size_t i = 0; i < t.columns.size(); ++i) {
            const auto& a = t.columns[i];
            const auto& b = loaded.schema.columns[i];
            if (a.name != b.name || a.ptype != b.ptype || a.dtype != b.dtype)
                throw RuntimeError("schema mismatch for table " + t.pred + " column " + a.name);
        }
    }

    Machine m{prog, db, args, SplitMix64{seed}, {}, {}};
    Machine::Scope main_scope;
    m.exec(prog.main_body, main_scope);
    return {std::move(m.published), std::move(m.leak)};
}

std::string leak_to_json(const std::vector<LeakEvent>& leak) {
    std::string out;
    for (const auto& ev : leak) {
        nlohmann::json j;
        j["event"] = ev.kind == LeakEvent::Kind::Declassify ? "declassify" : "publish";
        if (ev.kind == LeakEvent::Kind::Publish) j["name"] = ev.label;
        nlohmann::json vals = nlohmann::json::array();
        const TypedCol& c = ev.values;
        for (size_t i = 0; i < c.size(); ++i) {
            switch (c.type) {
                case ir::Type::Int: vals.push_back(c.i[i]); break;
                case ir::Type::Bool: vals.push_back(static_cast<int>(c.b[i])); break;
                case ir::Type::Float:
                    if (std::isnan(c.f[i]))
                        vals.push_back(nullptr);
                    else
                        vals.push_back(c.f[i]);
                    break;
            }
        }
        j["values"] = std::move(vals);
        out += j.dump();
        out += "\n";
    }
    return out;
}

} // namespace privalog::sim
