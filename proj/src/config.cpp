#include "hllg/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hllg {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

class Parser {
  public:
    explicit Parser(std::vector<ParseIssue>& issues) : issues_(issues) {}

    void fail(int line, const std::string& msg) { issues_.push_back({line, msg}); }

    bool to_double(int line, const std::string& v, double& out) {
        try {
            std::size_t pos = 0;
            out = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return true;
        } catch (...) {
            fail(line, "expected a number, got '" + v + "'");
            return false;
        }
    }
    bool to_int(int line, const std::string& v, long long& out) {
        try {
            std::size_t pos = 0;
            out = std::stoll(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return true;
        } catch (...) {
            fail(line, "expected an integer, got '" + v + "'");
            return false;
        }
    }
    bool to_bool(int line, const std::string& v, bool& out) {
        if (v == "true" || v == "1" || v == "yes" || v == "on") {
            out = true;
            return true;
        }
        if (v == "false" || v == "0" || v == "no" || v == "off") {
            out = false;
            return true;
        }
        fail(line, "expected a boolean, got '" + v + "'");
        return false;
    }

  private:
    std::vector<ParseIssue>& issues_;
};

}  // namespace

ParseResult parse_config(const std::string& text) {
    ParseResult result;
    Parser P(result.issues);

    Config cfg;
    // Raw grid inputs; the SpectralGrid is constructed after parsing.
    int n = 1;
    std::vector<long long> dims{512};
    std::vector<double> box;
    int n_line = 0, dims_line = 0, box_line = 0, equation_line = 0;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                P.fail(lineno, "malformed section header '" + line + "'");
                continue;
            }
            section = line.substr(1, line.size() - 2);
            if (section != "grid" && section != "params" && section != "initial_data" &&
                section != "output" && section != "checks")
                P.fail(lineno, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            P.fail(lineno, "expected 'key = value', got '" + line + "'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (section == "grid") {
            if (key == "n") {
                long long v;
                if (P.to_int(lineno, val, v)) n = static_cast<int>(v);
                n_line = lineno;
            } else if (key == "dims") {
                dims.clear();
                for (const auto& tok : split_list(val)) {
                    long long v;
                    if (P.to_int(lineno, tok, v)) dims.push_back(v);
                }
                dims_line = lineno;
            } else if (key == "box") {
                box.clear();
                for (const auto& tok : split_list(val)) {
                    double v;
                    if (P.to_double(lineno, tok, v)) box.push_back(v);
                }
                box_line = lineno;
            } else {
                P.fail(lineno, "unknown key '" + key + "' in [grid]");
            }
        } else if (section == "params") {
            auto& p = cfg.params;
            if (key == "equation") {
                equation_line = lineno;
                if (val == "hllg") p.equation = Equation::HLLG;
                else if (val == "hhhf") p.equation = Equation::HHHF;
                else if (val == "hwm") p.equation = Equation::HWM;
                else if (val == "llgr") p.equation = Equation::LLGR;
                else P.fail(lineno, "unknown equation '" + val + "'");
            } else if (key == "lambda") {
                double v;
                if (P.to_double(lineno, val, v)) {
                    if (v < 0.0) P.fail(lineno, "damping must be >= 0");
                    p.lambda = v;
                }
            } else if (key == "epsilon") {
                double v;
                if (P.to_double(lineno, val, v)) {
                    if (v < 0.0) P.fail(lineno, "epsilon must be >= 0");
                    p.epsilon = v;
                }
            } else if (key == "nu") {
                long long v;
                if (P.to_int(lineno, val, v)) {
                    if (v != 1 && v != 2) P.fail(lineno, "nu must be 1 or 2");
                    p.nu = static_cast<int>(v);
                }
            } else if (key == "dt") {
                double v;
                if (P.to_double(lineno, val, v)) {
                    if (!(v > 0.0)) P.fail(lineno, "dt must be > 0");
                    p.dt = v;
                }
            } else if (key == "T") {
                double v;
                if (P.to_double(lineno, val, v)) {
                    if (!(v > 0.0)) P.fail(lineno, "T must be > 0");
                    p.T = v;
                }
            } else if (key == "scheme") {
                if (val == "etdrk2") p.scheme = Scheme::ETDRK2;
                else if (val == "rk4") p.scheme = Scheme::RK4;
                else P.fail(lineno, "unknown scheme '" + val + "'");
            } else if (key == "dealias") {
                if (val == "none") p.dealias_policy = DealiasPolicy::none;
                else if (val == "quadratic") p.dealias_policy = DealiasPolicy::quadratic;
                else if (val == "cubic") p.dealias_policy = DealiasPolicy::cubic;
                else P.fail(lineno, "unknown dealias policy '" + val + "'");
            } else if (key == "renormalize") {
                P.to_bool(lineno, val, p.renormalize_each_step);
            } else if (key == "sample_every") {
                long long v;
                if (P.to_int(lineno, val, v)) {
                    if (v < 1) P.fail(lineno, "sample_every must be >= 1");
                    p.sample_every = static_cast<int>(v);
                }
            } else if (key == "seminorms") {
                p.row_seminorms.clear();
                for (const auto& tok : split_list(val)) {
                    double v;
                    if (P.to_double(lineno, tok, v)) {
                        if (v < 0.0) P.fail(lineno, "seminorm orders must be >= 0");
                        p.row_seminorms.push_back(v);
                    }
                }
            } else if (key == "integral_seminorms") {
                p.integral_seminorms.clear();
                for (const auto& tok : split_list(val)) {
                    double v;
                    if (P.to_double(lineno, tok, v)) {
                        if (v < 0.0) P.fail(lineno, "seminorm orders must be >= 0");
                        p.integral_seminorms.push_back(v);
                    }
                }
            } else if (key == "allow_nu_override") {
                P.to_bool(lineno, val, p.allow_nu_override);
            } else {
                P.fail(lineno, "unknown key '" + key + "' in [params]");
            }
        } else if (section == "initial_data") {
            auto& d = cfg.initial;
            if (key == "kind") {
                if (val != "constant" && val != "perturbation" && val != "great_circle")
                    P.fail(lineno, "unknown initial data kind '" + val + "'");
                d.kind = val;
            } else if (key == "Q") {
                d.Q.clear();
                for (const auto& tok : split_list(val)) {
                    double v;
                    if (P.to_double(lineno, tok, v)) d.Q.push_back(v);
                }
                if (d.Q.size() < 2) P.fail(lineno, "Q needs at least 2 components");
            } else if (key == "amplitude") {
                double v;
                if (P.to_double(lineno, val, v)) {
                    if (v < 0.0) P.fail(lineno, "amplitude must be >= 0");
                    d.amplitude = v;
                }
            } else if (key == "kmax") {
                long long v;
                if (P.to_int(lineno, val, v)) {
                    if (v < 1) P.fail(lineno, "kmax must be >= 1");
                    d.kmax = static_cast<int>(v);
                }
            } else if (key == "seed") {
                long long v;
                if (P.to_int(lineno, val, v)) d.seed = static_cast<std::uint64_t>(v);
            } else if (key == "profile") {
                if (val != "sine" && val != "winding" && val != "concentrated")
                    P.fail(lineno, "unknown profile '" + val + "'");
                d.profile = val;
            } else if (key == "degree") {
                long long v;
                if (P.to_int(lineno, val, v)) d.degree = static_cast<int>(v);
            } else if (key == "scale") {
                double v;
                if (P.to_double(lineno, val, v)) {
                    if (!(v > 0.0)) P.fail(lineno, "scale must be > 0");
                    d.scale = v;
                }
            } else {
                P.fail(lineno, "unknown key '" + key + "' in [initial_data]");
            }
        } else if (section == "output") {
            auto& o = cfg.output;
            if (key == "dir") o.dir = val;
            else if (key == "prefix") o.prefix = val;
            else if (key == "snapshots") {
                if (val != "none" && val != "final" && val.rfind("every:", 0) != 0)
                    P.fail(lineno, "snapshots must be none, final or every:<k>");
                o.snapshots = val;
            } else {
                P.fail(lineno, "unknown key '" + key + "' in [output]");
            }
        } else if (section == "checks") {
            auto& c = cfg.checks;
            if (key == "energy_identity") P.to_bool(lineno, val, c.energy_identity);
            else if (key == "monotone") {
                c.monotone.clear();
                for (const auto& tok : split_list(val)) {
                    long long v;
                    if (P.to_int(lineno, tok, v)) {
                        if (v < 1) P.fail(lineno, "monotone k must be >= 1");
                        c.monotone.push_back(static_cast<int>(v));
                    }
                }
            } else if (key == "decay") P.to_bool(lineno, val, c.decay);
            else if (key == "decay_threshold") {
                double v;
                if (P.to_double(lineno, val, v)) c.decay_threshold = v;
            } else if (key == "l2_growth") P.to_bool(lineno, val, c.l2_growth);
            else if (key == "stability") {
                double v;
                if (P.to_double(lineno, val, v)) {
                    if (v < 0.0) P.fail(lineno, "stability delta0 must be >= 0");
                    c.stability = v;
                }
            } else {
                P.fail(lineno, "unknown key '" + key + "' in [checks]");
            }
        } else {
            P.fail(lineno, "key '" + key + "' outside of any section");
        }
    }

    // Cross-field validation, attributed to the lines that set the values.
    if (n < 1 || n > 3) P.fail(n_line, "n must be 1, 2 or 3");
    if (result.issues.empty()) {
        std::array<int, 3> d{1, 1, 1};
        std::array<double, 3> b{1.0, 1.0, 1.0};
        if (dims.size() != 1 && static_cast<int>(dims.size()) != n)
            P.fail(dims_line, "dims needs 1 value or one per axis");
        if (!box.empty() && box.size() != 1 && static_cast<int>(box.size()) != n)
            P.fail(box_line, "box needs 1 value or one per axis");
        if (box.empty()) box.push_back(2.0 * 3.14159265358979323846 * 8.0);
        if (result.issues.empty()) {
            for (int j = 0; j < n; ++j) {
                d[j] = static_cast<int>(dims.size() == 1 ? dims[0] : dims[j]);
                b[j] = box.size() == 1 ? box[0] : box[j];
            }
            try {
                cfg.grid = SpectralGrid::make(n, d, b);
            } catch (const Error& e) {
                P.fail(dims_line ? dims_line : n_line, e.what());
            }
        }
    }
    if (result.issues.empty()) {
        try {
            cfg.params.validate(cfg.grid.n);
        } catch (const Error& e) {
            P.fail(equation_line, e.what());
        }
    }
    if (result.issues.empty()) {
        for (int k : cfg.checks.monotone)
            if (k > cfg.grid.n + 1)
                P.fail(equation_line, "monotone k = " + std::to_string(k) +
                                          " exceeds n + 1 = " + std::to_string(cfg.grid.n + 1));
    }

    if (result.issues.empty()) result.config = std::move(cfg);
    return result;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& v, const std::string& sep, std::string (*f)(T)) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += f(v[i]);
    }
    return out;
}

}  // namespace

std::string serialize_config(const Config& cfg) {
    std::ostringstream os;
    os << "[grid]\n";
    os << "n = " << cfg.grid.n << "\n";
    os << "dims =";
    for (int j = 0; j < cfg.grid.n; ++j) os << ' ' << cfg.grid.dims[j];
    os << "\nbox =";
    for (int j = 0; j < cfg.grid.n; ++j) os << ' ' << fmt(cfg.grid.box[j]);
    os << "\n\n[params]\n";
    const auto& p = cfg.params;
    os << "equation = " << to_string(p.equation) << "\n";
    os << "lambda = " << fmt(p.lambda) << "\n";
    os << "epsilon = " << fmt(p.epsilon) << "\n";
    os << "nu = " << p.nu << "\n";
    os << "dt = " << fmt(p.dt) << "\n";
    os << "T = " << fmt(p.T) << "\n";
    os << "scheme = " << to_string(p.scheme) << "\n";
    os << "dealias = "
       << (p.dealias_policy == DealiasPolicy::none
               ? "none"
               : p.dealias_policy == DealiasPolicy::quadratic ? "quadratic" : "cubic")
       << "\n";
    os << "renormalize = " << (p.renormalize_each_step ? "true" : "false") << "\n";
    os << "sample_every = " << p.sample_every << "\n";
    if (!p.row_seminorms.empty())
        os << "seminorms = " << join<double>(p.row_seminorms, ",", fmt) << "\n";
    if (!p.integral_seminorms.empty())
        os << "integral_seminorms = " << join<double>(p.integral_seminorms, ",", fmt) << "\n";
    if (p.allow_nu_override) os << "allow_nu_override = true\n";
    os << "\n[initial_data]\n";
    const auto& d = cfg.initial;
    os << "kind = " << d.kind << "\n";
    os << "Q = " << join<double>(d.Q, ",", fmt) << "\n";
    os << "amplitude = " << fmt(d.amplitude) << "\n";
    os << "kmax = " << d.kmax << "\n";
    os << "seed = " << d.seed << "\n";
    os << "profile = " << d.profile << "\n";
    os << "degree = " << d.degree << "\n";
    os << "scale = " << fmt(d.scale) << "\n";
    os << "\n[output]\n";
    os << "dir = " << cfg.output.dir << "\n";
    os << "prefix = " << cfg.output.prefix << "\n";
    os << "snapshots = " << cfg.output.snapshots << "\n";
    os << "\n[checks]\n";
    const auto& c = cfg.checks;
    os << "energy_identity = " << (c.energy_identity ? "true" : "false") << "\n";
    if (!c.monotone.empty()) {
        os << "monotone =";
        for (std::size_t i = 0; i < c.monotone.size(); ++i)
            os << (i ? "," : " ") << c.monotone[i];
        os << "\n";
    }
    os << "decay = " << (c.decay ? "true" : "false") << "\n";
    os << "decay_threshold = " << fmt(c.decay_threshold) << "\n";
    os << "l2_growth = " << (c.l2_growth ? "true" : "false") << "\n";
    if (c.stability >= 0.0) os << "stability = " << fmt(c.stability) << "\n";
    return os.str();
}

SphereField build_initial_data(const Config& cfg) {
    const auto& d = cfg.initial;
    const auto& g = cfg.grid;
    if (d.kind == "constant") {
        const int m = static_cast<int>(d.Q.size()) - 1;
        NodalField v(g, m + 1);
        double qn = 0.0;
        for (double q : d.Q) qn += q * q;
        qn = std::sqrt(qn);
        for (std::size_t i = 0; i < g.size(); ++i)
            for (int c = 0; c <= m; ++c) v.comps[c][i] = d.Q[c] / qn;
        return make_sphere_field(g, m, d.Q, std::move(v));
    }
    if (d.kind == "perturbation") {
        return make_perturbation(g, d.Q, d.amplitude, d.kmax, d.seed).u;
    }
    // great_circle
    if (g.n != 1) throw ParameterError("great_circle initial data requires n = 1");
    const double L = g.box[0];
    const double pi = 3.14159265358979323846;
    std::vector<double> theta(g.size());
    for (int i = 0; i < g.dims[0]; ++i) {
        const double x = g.node_coord(0, i);
        if (d.profile == "sine") {
            theta[i] = d.amplitude * std::sin(2.0 * pi * x / L);
        } else if (d.profile == "winding") {
            theta[i] = 2.0 * pi * d.degree * x / L + d.amplitude * std::sin(2.0 * pi * x / L);
        } else {  // concentrated degree-1 bubble at the box center
            theta[i] = d.degree * (pi + 2.0 * std::atan((x - L / 2.0) / d.scale));
        }
    }
    return make_great_circle(g, theta);
}

}  // namespace hllg
