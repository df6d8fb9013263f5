// config.cpp: Run configuration: plain-text [section] key = value files, validation, canonical echo

#include "lineshape/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lineshape/susceptibility.hpp"

namespace lineshape::cli {

ConfigError::ConfigError(const std::string& origin, int line_no, const std::string& msg)
    : std::runtime_error(origin + (line_no > 0 ? ":" + std::to_string(line_no) : std::string()) + ": " + msg),
      line(line_no) {}

namespace {

struct ExprParser {
    const std::string& s;
    std::size_t pos{0};

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    double expr() {
        double v = term();
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }
    double term() {
        double v = factor();
        for (;;) {
            if (eat('*')) v *= factor();
            else if (eat('/')) v /= factor();
            else return v;
        }
    }
    double factor() {
        if (eat('-')) return -factor();
        if (eat('+')) return factor();
        if (eat('(')) {
            const double v = expr();
            if (!eat(')')) throw std::invalid_argument("missing ')'");
            return v;
        }
        skip();
        if (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) {
            const std::size_t begin = pos;
            while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
            const std::string name = s.substr(begin, pos - begin);
            if (name == "pi") return M_PI;
            if (name == "magic") return std::acos(1.0 / std::sqrt(3.0));
            if (name == "inf") return INFINITY;
            throw std::invalid_argument("unknown constant '" + name + "'");
        }
        const char* begin = s.c_str() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) throw std::invalid_argument("expected a number");
        pos += static_cast<std::size_t>(end - begin);
        return v;
    }
};

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
    return out;
}

struct Entry {
    std::string value;
    int line;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> k{
        {"system", {"spins", "omega0", "J", "A", "D0", "geometry", "theta12", "phi12"}},
        {"bath", {"s", "omega_c", "beta", "kT"}},
        {"coupling", {"lambda1", "lambda2"}},
        {"sweep",
         {"kind", "start", "stop", "step", "drive", "response", "initial_correlation", "frequency_shift", "mode",
          "vary", "values", "threads"}},
        {"output", {"prefix", "plot"}},
    };
    return k;
}

class Reader {
public:
    Reader(const std::map<std::string, Section>& secs, std::string origin) : secs_(secs), origin_(std::move(origin)) {}

    const Entry* find(const std::string& sec, const std::string& key) const {
        auto s = secs_.find(sec);
        if (s == secs_.end()) return nullptr;
        auto e = s->second.find(key);
        return e == s->second.end() ? nullptr : &e->second;
    }
    double number(const std::string& sec, const std::string& key, double fallback) const {
        const Entry* e = find(sec, key);
        if (!e) return fallback;
        try {
            return evaluate_expression(e->value);
        } catch (const std::exception& ex) {
            throw ConfigError(origin_, e->line, "[" + sec + "] " + key + ": " + ex.what());
        }
    }
    std::vector<double> numbers(const std::string& sec, const std::string& key, std::vector<double> fallback) const {
        const Entry* e = find(sec, key);
        if (!e) return fallback;
        std::vector<double> out;
        for (const auto& item : split_list(e->value)) {
            try {
                out.push_back(evaluate_expression(item));
            } catch (const std::exception& ex) {
                throw ConfigError(origin_, e->line, "[" + sec + "] " + key + ": " + ex.what());
            }
        }
        return out;
    }
    int integer(const std::string& sec, const std::string& key, int fallback) const {
        const Entry* e = find(sec, key);
        if (!e) return fallback;
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(e->value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != e->value.size()) throw ConfigError(origin_, e->line, "[" + sec + "] " + key + ": expected an integer");
        return v;
    }
    bool boolean(const std::string& sec, const std::string& key, bool fallback) const {
        const Entry* e = find(sec, key);
        if (!e) return fallback;
        const std::string& v = e->value;
        if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
        if (v == "off" || v == "false" || v == "no" || v == "0") return false;
        throw ConfigError(origin_, e->line, "[" + sec + "] " + key + ": expected on/off");
    }
    std::string word(const std::string& sec, const std::string& key, const std::string& fallback,
                     const std::set<std::string>& allowed) const {
        const Entry* e = find(sec, key);
        if (!e) return fallback;
        if (!allowed.empty() && !allowed.count(e->value)) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
            throw ConfigError(origin_, e->line, "[" + sec + "] " + key + ": expected one of " + list);
        }
        return e->value;
    }

private:
    const std::map<std::string, Section>& secs_;
    std::string origin_;
};

} // namespace

double evaluate_expression(const std::string& text) {
    ExprParser p{text};
    const double v = p.expr();
    p.skip();
    if (p.pos != text.size()) throw std::invalid_argument("unexpected text '" + text.substr(p.pos) + "'");
    return v;
}

std::string to_string(SweepKind k) { return k == SweepKind::Omega ? "omega" : "field"; }

std::string to_string(Geometry g) {
    switch (g) {
    case Geometry::None: return "none";
    case Geometry::Pair: return "pair";
    case Geometry::Triangle: return "triangle";
    }
    return "none";
}

std::string to_string(kernel::Mode m) { return m == kernel::Mode::Full ? "full" : "born-markov"; }

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::map<std::string, Section> secs;
    std::istringstream in(text);
    std::string raw;
    std::string current;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto semi = line.find(';');
        if (semi != std::string::npos) line.erase(semi);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(origin, line_no, "unterminated section header");
            current = trim(line.substr(1, line.size() - 2));
            if (!known_keys().count(current)) throw ConfigError(origin, line_no, "unknown section [" + current + "]");
            if (secs.count(current)) throw ConfigError(origin, line_no, "duplicate section [" + current + "]");
            secs[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(origin, line_no, "expected 'key = value'");
        if (current.empty()) throw ConfigError(origin, line_no, "key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().at(current).count(key))
            throw ConfigError(origin, line_no, "unknown key '" + key + "' in [" + current + "]");
        if (value.empty()) throw ConfigError(origin, line_no, "[" + current + "] " + key + ": empty value");
        if (secs[current].count(key)) throw ConfigError(origin, line_no, "duplicate key '" + key + "'");
        secs[current][key] = Entry{value, line_no};
    }
    for (const char* required : {"system", "bath", "coupling", "sweep"})
        if (!secs.count(required)) throw ConfigError(origin, 0, std::string("missing section [") + required + "]");

    Reader r(secs, origin);
    RunConfig c;
    c.origin = origin;

    c.spins = r.integer("system", "spins", c.spins);
    c.omega0 = r.number("system", "omega0", c.omega0);
    c.J = r.number("system", "J", c.J);
    c.A = r.number("system", "A", c.A);
    c.D0 = r.number("system", "D0", c.D0);
    const std::string geom = r.word("system", "geometry", "none", {"none", "pair", "triangle"});
    c.geometry = geom == "pair" ? Geometry::Pair : geom == "triangle" ? Geometry::Triangle : Geometry::None;
    c.theta12 = r.number("system", "theta12", c.theta12);
    c.phi12 = r.number("system", "phi12", c.phi12);

    c.bath.s = r.number("bath", "s", c.bath.s);
    c.bath.omega_c = r.number("bath", "omega_c", c.bath.omega_c);
    if (r.find("bath", "beta") && r.find("bath", "kT"))
        throw ConfigError(origin, r.find("bath", "kT")->line, "[bath] give either beta or kT, not both");
    if (r.find("bath", "kT")) {
        const double kT = r.number("bath", "kT", 0.0);
        if (!(kT > 0.0)) throw ConfigError(origin, r.find("bath", "kT")->line, "[bath] kT must be > 0");
        c.bath.beta = 1.0 / kT;
    } else {
        c.bath.beta = r.number("bath", "beta", c.bath.beta);
    }

    c.coupling.lambda1 = r.numbers("coupling", "lambda1", c.coupling.lambda1);
    c.coupling.lambda2 = r.numbers("coupling", "lambda2", c.coupling.lambda2);

    c.kind = r.word("sweep", "kind", "omega", {"omega", "field"}) == "field" ? SweepKind::Field : SweepKind::Omega;
    c.start = r.number("sweep", "start", c.start);
    c.stop = r.number("sweep", "stop", c.stop);
    c.step = r.number("sweep", "step", c.step);
    c.drive = r.number("sweep", "drive", c.drive);
    c.response = r.word("sweep", "response", c.response, {"+-", "xx", "yy", "zz"});
    c.toggles.include_initial_correlation = r.boolean("sweep", "initial_correlation", true);
    c.toggles.include_frequency_shift = r.boolean("sweep", "frequency_shift", true);
    c.toggles.mode = r.word("sweep", "mode", "full", {"full", "born-markov"}) == "full" ? kernel::Mode::Full
                                                                                         : kernel::Mode::BornMarkov;
    c.series.key = r.word("sweep", "vary", "none", {"none", "lambda1", "lambda2", "theta12", "kT", "s"});
    if (const Entry* e = r.find("sweep", "values")) {
        c.series.texts = split_list(e->value);
        c.series.values = r.numbers("sweep", "values", {});
    }
    if (c.series.key != "none" && c.series.values.empty())
        throw ConfigError(origin, r.find("sweep", "vary")->line, "[sweep] vary needs a non-empty 'values' list");
    if (c.series.key == "none" && !c.series.values.empty())
        throw ConfigError(origin, r.find("sweep", "values")->line, "[sweep] values given without 'vary'");
    c.threads = r.integer("sweep", "threads", c.threads);

    c.prefix = r.word("output", "prefix", c.prefix, {});
    c.plot = r.boolean("output", "plot", c.plot);

    validate(c);
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(path, 0, "cannot open configuration file");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

void validate(const RunConfig& c) {
    auto fail = [&](const std::string& key, const std::string& msg) { throw ConfigError(c.origin, 0, key + ": " + msg); };
    if (c.spins < 1 || c.spins > 8) fail("[system] spins", "must be between 1 and 8");
    if (!(c.omega0 > 0.0) && c.kind == SweepKind::Omega) fail("[system] omega0", "must be > 0");
    if (c.geometry == Geometry::Pair && c.spins != 2) fail("[system] geometry", "pair requires spins = 2");
    if (c.geometry == Geometry::Triangle && c.spins != 3) fail("[system] geometry", "triangle requires spins = 3");
    if (c.geometry == Geometry::None && c.spins > 1 && (c.J != 0.0 || c.D0 != 0.0))
        fail("[system] geometry", "interacting spins need a geometry (pair or triangle)");
    if (!(c.bath.s >= 0.0)) fail("[bath] s", "must be >= 0");
    if (!(c.bath.omega_c > 0.0)) fail("[bath] omega_c", "must be > 0");
    if (!(c.bath.beta > 0.0) || !std::isfinite(c.bath.beta)) fail("[bath] beta", "must be finite and > 0");
    for (const auto* v : {&c.coupling.lambda1, &c.coupling.lambda2}) {
        const std::string key = v == &c.coupling.lambda1 ? "[coupling] lambda1" : "[coupling] lambda2";
        if (v->empty()) fail(key, "needs at least one value");
        if (v->size() != 1 && static_cast<int>(v->size()) != c.spins) fail(key, "give one value or one per spin");
    }
    if (!(c.step > 0.0)) fail("[sweep] step", "must be > 0");
    if (!(c.stop > c.start)) fail("[sweep] stop", "must exceed start");
    if ((c.stop - c.start) / c.step > 1e6) fail("[sweep] step", "grid exceeds 1e6 points");
    if (c.kind == SweepKind::Field && !(c.start > 0.0)) fail("[sweep] start", "field sweeps need start > 0");
    if (c.threads < 0) fail("[sweep] threads", "must be >= 0");
    if (c.prefix.empty()) fail("[output] prefix", "must not be empty");
    if (c.series.key == "kT")
        for (double v : c.series.values)
            if (!(v > 0.0)) fail("[sweep] values", "kT entries must be > 0");
}

std::string RunConfig::echo() const {
    std::ostringstream o;
    o << "[system]\n"
      << "spins = " << spins << "\n"
      << "omega0 = " << fmt(omega0) << "\n"
      << "J = " << fmt(J) << "\n"
      << "A = " << fmt(A) << "\n"
      << "D0 = " << fmt(D0) << "\n"
      << "geometry = " << to_string(geometry) << "\n"
      << "theta12 = " << fmt(theta12) << "\n"
      << "phi12 = " << fmt(phi12) << "\n"
      << "[bath]\n"
      << "s = " << fmt(bath.s) << "\n"
      << "omega_c = " << fmt(bath.omega_c) << "\n"
      << "beta = " << fmt(bath.beta) << "\n"
      << "[coupling]\n"
      << "lambda1 = " << fmt_list(coupling.lambda1) << "\n"
      << "lambda2 = " << fmt_list(coupling.lambda2) << "\n"
      << "[sweep]\n"
      << "kind = " << to_string(kind) << "\n"
      << "start = " << fmt(start) << "\n"
      << "stop = " << fmt(stop) << "\n"
      << "step = " << fmt(step) << "\n"
      << "drive = " << fmt(drive) << "\n"
      << "response = " << response << "\n"
      << "initial_correlation = " << (toggles.include_initial_correlation ? "on" : "off") << "\n"
      << "frequency_shift = " << (toggles.include_frequency_shift ? "on" : "off") << "\n"
      << "mode = " << to_string(toggles.mode) << "\n"
      << "vary = " << series.key << "\n";
    if (series.key != "none") o << "values = " << fmt_list(series.values) << "\n";
    o << "[output]\n"
      << "prefix = " << prefix << "\n"
      << "plot = " << (plot ? "on" : "off") << "\n";
    return o.str();
}

std::uint64_t RunConfig::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : echo()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

ham::SpinSystemSpec RunConfig::system() const {
    ham::SpinSystemSpec s;
    s.num_spins = spins;
    s.omega0 = omega0;
    s.J = J;
    s.anisotropy_A = A;
    s.D0 = D0;
    if (geometry == Geometry::Pair) s.pairs = ham::two_spin_geometry(theta12, phi12);
    if (geometry == Geometry::Triangle) s.pairs = ham::triangle_geometry(theta12);
    return s;
}

std::vector<double> RunConfig::grid() const { return chi::linspace_step(start, stop, step); }

RunConfig RunConfig::with_series(std::size_t k) const {
    RunConfig c = *this;
    if (series.key == "none") return c;
    const double v = series.values.at(k);
    if (series.key == "lambda1") c.coupling.lambda1 = {v};
    else if (series.key == "lambda2") c.coupling.lambda2 = {v};
    else if (series.key == "theta12") c.theta12 = v;
    else if (series.key == "kT") c.bath.beta = 1.0 / v;
    else if (series.key == "s") c.bath.s = v;
    c.series = SeriesSpec{};
    return c;
}

} // namespace lineshape::cli
