#include <sstream>

#include "privalog/corpus.hpp"
#include "privalog/frontend.hpp"

namespace privalog {

namespace {

struct Rng {
    uint64_t s;
    uint64_t next() {
        uint64_t z = (s += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    size_t below(size_t n) { return static_cast<size_t>(next() % n); }
    int64_t small_int() { return static_cast<int64_t>(next() % 21) - 10; } // [-10, 10]
    bool chance(int percent) { return below(100) < static_cast<size_t>(percent); }
};

struct Generator {
    Rng rng;
    std::ostringstream src;
    Database db;
    ClientArgs args;

    struct Pred {
        std::string name;
        size_t arity;
        bool edb;
    };
    std::vector<Pred> preds;
    int fresh_var = 0;
    int client_arg = 0;

    std::string new_var() { return "V" + std::to_string(fresh_var++); }

    void make_tables() {
        size_t ntables = 1 + rng.below(2);
        for (size_t t = 0; t < ntables; ++t) {
            std::string name = "t" + std::to_string(t);
            size_t arity = 1 + rng.below(3);
            Table table;
            table.schema.pred = name;
            src << ":-type(" << name << "(";
            for (size_t c = 0; c < arity; ++c) {
                SchemaColumn col;
                col.name = "c" + std::to_string(c);
                col.ptype = rng.chance(50) ? PrivacyType::Private : PrivacyType::Public;
                col.dtype = DataType::Int;
                if (c) src << ", ";
                src << col.name << " : " << to_string(col.ptype) << " int";
                table.schema.columns.push_back(std::move(col));
            }
            src << ")).\n";
            size_t rows = rng.below(9);
            for (size_t r = 0; r < rows; ++r) {
                std::vector<Value> row;
                for (size_t c = 0; c < arity; ++c) row.push_back(Value::integer(rng.small_int()));
                table.rows.push_back(std::move(row));
            }
            table.finalize();
            preds.push_back({name, arity, true});
            db.tables.emplace(name, std::move(table));
        }
        src << "\n";
    }

    // one positive atom over a random known predicate; fresh vars bind, with
    // an occasional repeated bound variable for join selectivity
    std::string make_atom(const Pred& p, std::vector<std::string>& bound) {
        std::ostringstream atom;
        atom << p.name << "(";
        for (size_t i = 0; i < p.arity; ++i) {
            if (i) atom << ", ";
            if (!bound.empty() && rng.chance(25)) {
                atom << bound[rng.below(bound.size())];
            } else if (rng.chance(12)) {
                atom << rng.small_int();
            } else {
                std::string v = new_var();
                bound.push_back(v);
                atom << v;
            }
        }
        atom << ")";
        return atom.str();
    }

    std::string cmp_op() {
        static const char* ops[] = {"<", "=<", ">=", ">", "=:=", "=/="};
        return ops[rng.below(6)];
    }

    std::string make_rule(const std::string& head, size_t arity, size_t stratum) {
        std::vector<std::string> bound;
        std::vector<std::string> lits;

        size_t natoms = 1 + rng.below(2);
        for (size_t a = 0; a < natoms; ++a) {
            // tables, or heads of strictly lower rules (stratified)
            std::vector<const Pred*> cands;
            for (const auto& p : preds)
                if (p.edb || (!p.edb && &p - preds.data() < static_cast<long>(stratum)))
                    cands.push_back(&p);
            const Pred& p = *cands[rng.below(cands.size())];
            lits.push_back(make_atom(p, bound));
        }
        if (bound.empty()) return ""; // all-constant atoms: retry

        if (rng.chance(60)) {
            const std::string& v = bound[rng.below(bound.size())];
            lits.push_back(v + " " + cmp_op() + " " + std::to_string(rng.small_int()));
        }
        if (bound.size() >= 2 && rng.chance(30)) {
            const std::string& a = bound[rng.below(bound.size())];
            const std::string& b = bound[rng.below(bound.size())];
            lits.push_back(a + " " + cmp_op() + " " + b);
        }
        if (!bound.empty() && rng.chance(30)) {
            // ground disjunction of two comparisons
            const std::string& v = bound[rng.below(bound.size())];
            lits.push_back("(" + v + " " + cmp_op() + " " + std::to_string(rng.small_int()) +
                           " ; " + v + " " + cmp_op() + " " + std::to_string(rng.small_int()) +
                           ")");
        }
        if (!bound.empty() && rng.chance(35)) {
            // assignment, occasionally split across a free disjunction
            std::string z = new_var();
            const std::string& v = bound[rng.below(bound.size())];
            if (rng.chance(30)) {
                const std::string& w = bound[rng.below(bound.size())];
                lits.push_back("(" + z + " = " + v + " + " + std::to_string(rng.below(4)) +
                               " ; " + z + " = " + w + " - " + std::to_string(rng.below(4)) +
                               ")");
            } else {
                lits.push_back(z + " = " + v + " " + (rng.chance(50) ? "+" : "*") + " " +
                               std::to_string(rng.below(5)));
            }
            bound.push_back(z);
        }
        if (rng.chance(30)) {
            // one negated EDB atom over already-bound variables
            std::vector<const Pred*> tables;
            for (const auto& p : preds)
                if (p.edb) tables.push_back(&p);
            const Pred& p = *tables[rng.below(tables.size())];
            if (bound.size() >= 1) {
                std::ostringstream atom;
                atom << "\\+ " << p.name << "(";
                for (size_t i = 0; i < p.arity; ++i) {
                    if (i) atom << ", ";
                    if (rng.chance(70))
                        atom << bound[rng.below(bound.size())];
                    else
                        atom << rng.small_int();
                }
                atom << ")";
                lits.push_back(atom.str());
            }
        }

        // head arguments drawn from bound variables (duplicates allowed by
        // desugaring, but keep them distinct here)
        std::vector<std::string> head_vars;
        for (size_t i = 0; i < arity; ++i) {
            std::string pick;
            for (int attempt = 0; attempt < 8 && pick.empty(); ++attempt) {
                const std::string& cand = bound[rng.below(bound.size())];
                bool used = false;
                for (const auto& h : head_vars) used |= (h == cand);
                if (!used) pick = cand;
            }
            if (pick.empty()) return ""; // retry with a different shape
            head_vars.push_back(pick);
        }

        std::ostringstream rule;
        rule << head << "(";
        for (size_t i = 0; i < arity; ++i) rule << (i ? ", " : "") << head_vars[i];
        rule << ") :-\n    ";
        for (size_t i = 0; i < lits.size(); ++i) rule << (i ? ",\n    " : "") << lits[i];
        rule << ".\n";
        return rule.str();
    }

    void make_rules() {
        size_t nrules = 1 + rng.below(3);
        size_t base = preds.size();
        for (size_t r = 0; r < nrules; ++r) {
            std::string head = "p" + std::to_string(r);
            size_t arity = 1 + rng.below(2);
            std::string rule;
            while (rule.empty()) rule = make_rule(head, arity, base + r);
            src << rule << "\n";
            preds.push_back({head, arity, false});
        }
    }

    void make_goal() {
        const Pred& target = preds.back();
        std::vector<std::string> outputs;
        std::ostringstream atom;
        atom << target.name << "(";
        for (size_t i = 0; i < target.arity; ++i) {
            if (i) atom << ", ";
            bool last_chance_for_output = (i + 1 == target.arity) && outputs.empty();
            if (!last_chance_for_output && rng.chance(25)) {
                atom << rng.small_int(); // constant input
            } else if (!last_chance_for_output && rng.chance(12)) {
                std::string name = "a" + std::to_string(client_arg++);
                args.emplace(name, Value::integer(rng.small_int()));
                atom << "@" << name;
            } else {
                std::string v = "O" + std::to_string(i);
                outputs.push_back(v);
                atom << v;
            }
        }
        atom << ")";

        if (!outputs.empty() && rng.chance(25)) {
            static const char* kinds[] = {"min", "max", "sum", "count"};
            const char* kind = kinds[rng.below(4)];
            const std::string& over = outputs[rng.below(outputs.size())];
            src << "?-" << kind << "(" << atom.str() << ", " << over << ", Agg).\n";
        } else {
            src << "?-" << atom.str() << ".\n";
        }
    }

    CorpusFixture run() {
        make_tables();
        make_rules();
        make_goal();
        return {src.str(), std::move(db), std::move(args)};
    }
};

} // namespace

CorpusFixture generate_fixture(uint64_t seed) {
    Generator g{Rng{seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull}, {}, {}, {}, {}, 0, 0};
    return g.run();
}

Database random_database_for(const CorpusFixture& fixture, uint64_t seed) {
    Rng rng{seed * 0xA0761D6478BD642Full + 17};
    Database out;
    for (const auto& [name, t] : fixture.db.tables) {
        Table nt;
        nt.schema = t.schema;
        size_t rows = rng.below(9);
        for (size_t r = 0; r < rows; ++r) {
            std::vector<Value> row;
            for (size_t c = 0; c < t.schema.columns.size(); ++c)
                row.push_back(Value::integer(rng.small_int()));
            nt.rows.push_back(std::move(row));
        }
        nt.finalize();
        out.tables.emplace(name, std::move(nt));
    }
    return out;
}

} // namespace privalog
