#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "minsurf/support.hpp"

namespace minsurf {

/// 17 significant digits: round-trips every double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Write a whole file atomically (temp + rename).
inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open for writing: " + tmp.string());
        out << text;
    }
    fs::rename(tmp, path);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return int(i);
        throw ConfigError("csv: missing column " + name);
    }
};

inline std::string to_csv(const CsvTable& t) {
    std::ostringstream out;
    for (size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
    out << "\r\n";
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << "\r\n";
    }
    return out.str();
}

inline void write_csv(const std::filesystem::path& path, const CsvTable& t) {
    write_text_atomic(path, to_csv(t));
}

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path.string());
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        if (first) {
            while (std::getline(ss, cell, ',')) t.header.push_back(cell);
            first = false;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != t.header.size())
            throw ConfigError("csv: ragged row in " + path.string());
        t.rows.push_back(std::move(row));
    }
    if (first) throw ConfigError("csv: empty file " + path.string());
    return t;
}

/// Support slices travel as CSV: coordinate columns then h,
/// one node per row, >= 15 significant digits.
inline void save_slice_csv(const SupportSlice& slice, const std::filesystem::path& path) {
    const SphereGrid& g = slice.grid();
    CsvTable t;
    if (g.dim() == 2) {
        t.header = {"theta", "h"};
        for (int k = 0; k < g.num_nodes(); ++k)
            t.rows.push_back({g.theta(k), slice.h(k)});
    } else {
        t.header = {"phi", "lambda", "h"};
        for (int k = 0; k < g.num_nodes(); ++k)
            t.rows.push_back({g.phi(g.node_phi(k)), g.lambda(g.node_lambda(k)), slice.h(k)});
    }
    write_csv(path, t);
}

/// Load an n = 2 slice; the grid is reconstructed from the theta column,
/// which must be the uniform periodic partition of [0, 2*pi).
inline SupportSlice load_slice_csv(const std::filesystem::path& path,
                                   DiffMethod method = DiffMethod::spectral) {
    const CsvTable t = read_csv(path);
    const int ct = t.column("theta"), ch = t.column("h");
    const int n = int(t.rows.size());
    if (n < 8) throw ConfigError("load_slice_csv: need >= 8 nodes");
    GridPtr grid = build_grid(2, n, method);
    Eigen::VectorXd h(n);
    for (int k = 0; k < n; ++k) {
        if (std::abs(t.rows[k][ct] - grid->theta(k)) > 1e-9)
            throw ConfigError("load_slice_csv: theta column is not the uniform grid");
        h[k] = t.rows[k][ch];
    }
    return SupportSlice(std::move(grid), std::move(h));
}

} // namespace minsurf
