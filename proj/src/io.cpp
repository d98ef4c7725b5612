#include "aggeq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace aggeq::io {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw solver_error("cannot open " + path.string() + " for writing");
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out << ',';
        out << header[c];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << format_number(row[c]);
        }
        out << '\n';
    }
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw solver_error("cannot open " + path.string() + " for writing");
    out << content;
}

RadialProfile read_profile_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot read profile file " + path.string());
    std::vector<double> r, v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',')) continue;
        try {
            const double rv = std::stod(a);
            const double vv = std::stod(b);
            r.push_back(rv);
            v.push_back(vv);
        } catch (const std::exception&) {
            continue;  // header or junk row
        }
    }
    if (r.size() < 2)
        throw config_error("profile file " + path.string()
                           + " has fewer than two data rows");
    for (std::size_t j = 0; j + 1 < r.size(); ++j)
        if (!(r[j + 1] > r[j]))
            throw config_error("profile radii must be strictly increasing");
    RadialGrid grid;
    grid.R_edge = r.back();
    grid.nodes = std::move(r);
    return RadialProfile(grid, std::move(v));
}

}  // namespace aggeq::io
