#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "grouplaw/errors.hpp"

namespace grouplaw {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "grouplaw 0.1.0";

// Machine-readable results plus a human summary. Every number shown in the
// summary is also present in the records.
struct Report {
    std::vector<Json> records;            // one object per results.jsonl line
    std::vector<std::string> summary;     // csv rows, header first
    Json provenance;                      // config echo, seed, version
    std::vector<std::string> messages;    // human lines for stdout
    bool ok = true;                       // false on failed bundled criteria
};

namespace detail {
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}
}  // namespace detail

// Writes results.jsonl, summary.csv and provenance.json atomically.
inline void write_report(const Report& r, const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    std::string jsonl;
    for (const auto& rec : r.records) jsonl += rec.dump() + "\n";
    detail::atomic_write(dir / "results.jsonl", jsonl);
    std::string csv;
    for (const auto& row : r.summary) csv += row + "\n";
    detail::atomic_write(dir / "summary.csv", csv);
    detail::atomic_write(dir / "provenance.json", r.provenance.dump(2) + "\n");
}

}  // namespace grouplaw
