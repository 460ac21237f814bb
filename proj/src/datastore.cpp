#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "privalog/datastore.hpp"

namespace privalog {

namespace {

using nlohmann::json;

std::string dtype_name(DataType t) {
    switch (t) {
        case DataType::Int: return "int";
        case DataType::Float: return "float";
        case DataType::String: return "string";
    }
    return "?";
}

DataType parse_dtype(const std::string& s) {
    if (s == "int") return DataType::Int;
    if (s == "float") return DataType::Float;
    if (s == "string") return DataType::String;
    throw DataError("unknown dtype " + s);
}

std::string csv_escape(const std::string& s) {
    bool needs = s.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line, int lineno,
                                        const std::string& file) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                continue;
            }
            cell += c;
            ++i;
            continue;
        }
        if (c == '"' && cell.empty()) {
            quoted = true;
            ++i;
            continue;
        }
        if (c == ',') {
            out.push_back(std::move(cell));
            cell.clear();
            ++i;
            continue;
        }
        cell += c;
        ++i;
    }
    if (quoted) throw DataError(file + ":" + std::to_string(lineno) + ": unterminated quote");
    out.push_back(std::move(cell));
    return out;
}

std::string float_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Value parse_cell(const std::string& text, const SchemaColumn& col, const std::string& file,
                 int row, size_t colidx) {
    auto fail = [&](const std::string& why) {
        throw DataError(file + ": row " + std::to_string(row) + ", column " + col.name + " (" +
                        std::to_string(colidx + 1) + "): " + why);
    };
    switch (col.dtype) {
        case DataType::Int: {
            if (text.empty()) fail("empty int cell");
            char* end = nullptr;
            long long v = std::strtoll(text.c_str(), &end, 10);
            if (end != text.c_str() + text.size())
                fail("'" + text + "' is not an int");
            return Value::integer(v);
        }
        case DataType::Float: {
            if (text.empty()) fail("empty float cell");
            char* end = nullptr;
            double v = std::strtod(text.c_str(), &end);
            if (end != text.c_str() + text.size())
                fail("'" + text + "' is not a float");
            return Value::real(v);
        }
        case DataType::String: return Value::str(text);
    }
    fail("bad column type");
    return Value();
}

} // namespace

Database load_database(const std::filesystem::path& dir,
                       const std::vector<SchemaDecl>& schemas) {
    Database db;
    for (const auto& schema : schemas) {
        std::filesystem::path manifest_path = dir / (schema.pred + ".json");
        std::filesystem::path csv_path = dir / (schema.pred + ".csv");
        std::ifstream mf(manifest_path);
        if (!mf) throw DataError("missing manifest " + manifest_path.string());
        json manifest = json::parse(mf);

        if (manifest.at("table").get<std::string>() != schema.pred)
            throw DataError("manifest table name mismatch in " + manifest_path.string());
        const json& cols = manifest.at("columns");
        if (cols.size() != schema.columns.size())
            throw DataError("manifest column count mismatch for " + schema.pred);
        for (size_t i = 0; i < schema.columns.size(); ++i) {
            const json& c = cols[i];
            const SchemaColumn& want = schema.columns[i];
            if (c.at("name").get<std::string>() != want.name)
                throw DataError("manifest column name mismatch for " + schema.pred + "." +
                                want.name);
            std::string pt = c.at("ptype").get<std::string>();
            if ((pt == "private") != (want.ptype == PrivacyType::Private))
                throw DataError("manifest privacy mismatch for " + schema.pred + "." + want.name);
            if (parse_dtype(c.at("dtype").get<std::string>()) != want.dtype)
                throw DataError("manifest dtype mismatch for " + schema.pred + "." + want.name);
        }

        Table t;
        t.schema = schema;
        std::ifstream cf(csv_path);
        if (!cf) throw DataError("missing table file " + csv_path.string());
        std::string line;
        int lineno = 0;
        while (std::getline(cf, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (lineno == 1) continue; // header
            if (line.empty()) continue;
            auto cells = split_csv_line(line, lineno, csv_path.string());
            if (cells.size() != schema.columns.size())
                throw DataError(csv_path.string() + ": row " + std::to_string(lineno - 1) +
                                ": expected " + std::to_string(schema.columns.size()) +
                                " cells, got " + std::to_string(cells.size()));
            std::vector<Value> row;
            row.reserve(cells.size());
            for (size_t c = 0; c < cells.size(); ++c)
                row.push_back(
                    parse_cell(cells[c], schema.columns[c], csv_path.string(), lineno - 1, c));
            t.rows.push_back(std::move(row));
        }
        t.finalize();
        db.tables.emplace(schema.pred, std::move(t));
    }
    return db;
}

void save_database(const std::filesystem::path& dir, const Database& db) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, t] : db.tables) {
        json manifest;
        manifest["table"] = name;
        json cols = json::array();
        for (size_t i = 0; i < t.schema.columns.size(); ++i) {
            const auto& c = t.schema.columns[i];
            json jc;
            jc["name"] = c.name;
            jc["ptype"] = c.ptype == PrivacyType::Private ? "private" : "public";
            jc["dtype"] = dtype_name(c.dtype);
            if (t.schema.primary_key && *t.schema.primary_key == static_cast<int>(i))
                jc["key"] = true;
            cols.push_back(std::move(jc));
        }
        manifest["columns"] = std::move(cols);
        manifest["rows"] = t.rows.size();
        std::ofstream mf(dir / (name + ".json"));
        mf << manifest.dump(2) << "\n";

        std::ofstream cf(dir / (name + ".csv"));
        for (size_t i = 0; i < t.schema.columns.size(); ++i)
            cf << (i ? "," : "") << csv_escape(t.schema.columns[i].name);
        cf << "\n";
        for (const auto& row : t.rows) {
            for (size_t c = 0; c < row.size(); ++c) {
                if (c) cf << ",";
                switch (row[c].kind()) {
                    case Value::Kind::Int: cf << row[c].as_int(); break;
                    case Value::Kind::Float: cf << float_text(row[c].as_float()); break;
                    case Value::Kind::Str: cf << csv_escape(row[c].as_str()); break;
                    default: throw DataError("garbage value in table " + name);
                }
            }
            cf << "\n";
        }
    }
}

} // namespace privalog
