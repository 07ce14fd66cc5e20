#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace otoc::io {

/// 17 significant digits: round-trips doubles exactly and keeps output
/// byte-stable across runs.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Writes atomically: temp file in the target directory, then rename.
inline void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::filesystem::path target(path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out.good()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, target);
}

struct CsvTable {
    std::vector<std::string> comments; // emitted as '# ...' lines
    std::string header;                // exact column header line
    std::vector<std::vector<double>> rows;

    std::string render() const {
        std::string out;
        for (const std::string& c : comments) {
            out += "# " + c + "\n";
        }
        out += header + "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ",";
                out += fmt17(row[i]);
            }
            out += "\n";
        }
        return out;
    }

    void write(const std::string& path) const { write_file_atomic(path, render()); }
};

} // namespace otoc::io
