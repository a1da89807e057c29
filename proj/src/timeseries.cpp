#include "hllg/timeseries.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hllg/errors.hpp"

namespace hllg {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_s(double s) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", s);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string timeseries_csv(const std::vector<DiagnosticsRow>& rows) {
    std::ostringstream os;
    os << "t,E,E_eps";
    if (!rows.empty())
        for (const auto& [s, v] : rows.front().seminorms) os << ",Hs_" << fmt_s(s);
    os << ",dist_L2,dist_Linf,dissipation,drift,grad_seminorm\n";
    for (const auto& r : rows) {
        os << fmt17(r.t) << ',' << fmt17(r.E) << ',' << fmt17(r.E_eps);
        for (const auto& [s, v] : r.seminorms) os << ',' << fmt17(v);
        os << ',' << fmt17(r.dist_L2) << ',' << fmt17(r.dist_Linf) << ','
           << fmt17(r.dissipation_integral) << ',' << fmt17(r.constraint_drift) << ','
           << fmt17(r.grad_seminorm) << '\n';
    }
    return os.str();
}

void write_timeseries(const std::vector<DiagnosticsRow>& rows, const std::string& path) {
    write_file(path, timeseries_csv(rows));
}

std::vector<DiagnosticsRow> read_timeseries(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot open timeseries '" + path + "'");
    std::string line;
    if (!std::getline(f, line)) throw FormatError("timeseries '" + path + "' is empty");
    const auto header = split_csv(line);
    if (header.size() < 8 || header[0] != "t" || header[1] != "E" || header[2] != "E_eps")
        throw FormatError("timeseries '" + path + "': unexpected header");
    std::vector<double> s_values;
    std::size_t col = 3;
    while (col < header.size() && header[col].rfind("Hs_", 0) == 0) {
        s_values.push_back(std::stod(header[col].substr(3)));
        ++col;
    }
    const std::size_t expected = 3 + s_values.size() + 5;
    if (header.size() != expected)
        throw FormatError("timeseries '" + path + "': unexpected column count");

    std::vector<DiagnosticsRow> rows;
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != expected)
            throw FormatError("timeseries '" + path + "' line " + std::to_string(lineno) +
                              ": wrong cell count");
        DiagnosticsRow r;
        std::size_t i = 0;
        auto next = [&]() { return std::stod(cells[i++]); };
        r.t = next();
        r.E = next();
        r.E_eps = next();
        for (double s : s_values) r.seminorms.emplace_back(s, next());
        r.dist_L2 = next();
        r.dist_Linf = next();
        r.dissipation_integral = next();
        r.constraint_drift = next();
        r.grad_seminorm = next();
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw FormatError("cannot open '" + path + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw FormatError("write failed for '" + path + "'");
}

}  // namespace hllg
