#include "privalog/relation.hpp"

#include "privalog/crc32.hpp"

namespace privalog {

void Table::finalize() {
    std::vector<std::vector<Value>> deduped;
    std::set<std::vector<Value>> seen;
    for (auto& row : rows)
        if (seen.insert(row).second) deduped.push_back(std::move(row));
    rows = std::move(deduped);

    hash_columns.assign(schema.columns.size(), {});
    for (size_t c = 0; c < schema.columns.size(); ++c) {
        if (schema.columns[c].dtype != DataType::String) continue;
        hash_columns[c].reserve(rows.size());
        for (const auto& row : rows)
            hash_columns[c].push_back(static_cast<int64_t>(crc32(row[c].as_str())));
    }
}

} // namespace privalog
