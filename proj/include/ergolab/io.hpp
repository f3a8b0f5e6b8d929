#ifndef ERGOLAB_IO_HPP
#define ERGOLAB_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergolab/common.hpp"

namespace ergolab {

// fixed 17-significant-digit formatting: round-trip exact and byte-stable
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Canonical JSON: sorted keys (nlohmann objects iterate sorted), %.17g
// doubles, LF-free single line.  Byte-identical for identical inputs.
inline void canonical_dump(const nlohmann::json& j, std::string& out, int indent = 0) {
    auto pad = [&](int lvl) { out.append(std::size_t(2 * lvl), ' '); };
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            std::size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                pad(indent + 1);
                out += nlohmann::json(it.key()).dump();
                out += ": ";
                canonical_dump(it.value(), out, indent + 1);
                if (i + 1 < j.size()) out += ",";
                out += "\n";
            }
            pad(indent);
            out += "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                canonical_dump(j[i], out, indent);
                if (i + 1 < j.size()) out += ", ";
            }
            out += "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw numeric_error("io: cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw numeric_error("io: write failed for " + path.string());
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::string out;
    canonical_dump(j, out);
    out += "\n";
    write_text(path, out);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out += table.header[i];
        out += (i + 1 < table.header.size()) ? "," : "\n";
    }
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += format_double(row[i]);
            out += (i + 1 < row.size()) ? "," : "\n";
        }
    }
    write_text(path, out);
}

} // namespace ergolab

#endif
