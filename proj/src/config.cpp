#include "hsflow/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hsflow/errors.hpp"

namespace hsflow {

namespace {

// A leaf value with enough context for an error message. JSON leaves carry
// line 0 and remember whether they were strings.
struct Field {
    std::string text;
    int line = 0;
    bool quoted = false;
};

using Section = std::map<std::string, Field>;
using Sections = std::map<std::string, Section>;

const std::map<std::string, std::vector<std::string>>& known_keys() {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"lattice", {"n", "L"}},
        {"initial", {"generator", "amplitude", "seed", "modes"}},
        {"flow",
         {"dt_policy", "dt", "cfl", "t_end", "max_steps", "order", "integrator", "diagnostic_every", "checkpoint_every",
          "degeneration_threshold", "fiber_samples", "seed", "coflow_constant_a"}},
        {"output", {"dir"}},
    };
    return keys;
}

class Reader {
public:
    Reader(Sections s, std::string source) : sections_(std::move(s)), source_(std::move(source)) {
        for (const auto& [name, sec] : sections_) {
            const auto it = known_keys().find(name);
            if (it == known_keys().end()) {
                const int line = sec.empty() ? 0 : sec.begin()->second.line;
                fail(line, "unknown section [" + name + "]");
            }
            for (const auto& [key, field] : sec) {
                bool ok = false;
                for (const auto& k : it->second) ok = ok || k == key;
                if (!ok) fail(field.line, "unknown key '" + name + "." + key + "'");
            }
        }
    }

    const Field* find(const std::string& sec, const std::string& key) const {
        const auto s = sections_.find(sec);
        if (s == sections_.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    template <class T>
    void number(const std::string& sec, const std::string& key, T& out) const {
        if (const Field* f = find(sec, key)) out = parse_number<T>(*f, sec + "." + key);
    }

    template <class T, std::size_t N>
    void numbers(const std::string& sec, const std::string& key, std::array<T, N>& out) const {
        const Field* f = find(sec, key);
        if (!f) return;
        std::istringstream is(f->text);
        std::vector<std::string> parts;
        for (std::string tok; is >> tok;) parts.push_back(tok);
        if (parts.size() != N)
            fail(f->line, "'" + sec + "." + key + "' needs " + std::to_string(N) + " values, got " + std::to_string(parts.size()));
        for (std::size_t i = 0; i < N; ++i) out[i] = parse_number<T>(Field{parts[i], f->line, false}, sec + "." + key);
    }

    void string(const std::string& sec, const std::string& key, std::string& out) const {
        if (const Field* f = find(sec, key)) out = f->text;
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        std::string where = source_;
        if (line > 0) where += ":" + std::to_string(line);
        throw ValidationError(where + ": " + msg);
    }

private:
    template <class T>
    T parse_number(const Field& f, const std::string& name) const {
        if (f.quoted) fail(f.line, "'" + name + "' must be a number, got a string");
        T v{};
        const char* b = f.text.data();
        const char* e = b + f.text.size();
        const auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e) fail(f.line, "'" + name + "': cannot parse '" + f.text + "' as a number");
        return v;
    }

    Sections sections_;
    std::string source_;
};

ExperimentConfig from_reader(const Reader& r) {
    ExperimentConfig c;
    r.numbers("lattice", "n", c.n);
    r.numbers("lattice", "L", c.lengths);

    r.string("initial", "generator", c.initial.generator);
    r.number("initial", "amplitude", c.initial.amplitude);
    r.number("initial", "seed", c.initial.seed);
    r.number("initial", "modes", c.initial.modes);

    if (const Field* f = r.find("flow", "dt_policy")) {
        if (f->text == "fixed") c.flow.dt_policy = DtPolicy::fixed;
        else if (f->text == "cfl") c.flow.dt_policy = DtPolicy::cfl;
        else r.fail(f->line, "flow.dt_policy must be 'fixed' or 'cfl', got '" + f->text + "'");
    }
    if (const Field* f = r.find("flow", "integrator")) {
        if (f->text == "rk4") c.flow.integrator = Integrator::rk4;
        else if (f->text == "euler") c.flow.integrator = Integrator::euler;
        else r.fail(f->line, "flow.integrator must be 'rk4' or 'euler', got '" + f->text + "'");
    }
    r.number("flow", "dt", c.flow.dt);
    r.number("flow", "cfl", c.flow.cfl);
    r.number("flow", "t_end", c.flow.t_end);
    r.number("flow", "max_steps", c.flow.max_steps);
    r.number("flow", "order", c.flow.order);
    r.number("flow", "diagnostic_every", c.flow.diagnostic_every);
    r.number("flow", "checkpoint_every", c.flow.checkpoint_every);
    r.number("flow", "degeneration_threshold", c.flow.degeneration_threshold);
    r.number("flow", "fiber_samples", c.flow.fiber_samples);
    r.number("flow", "seed", c.flow.seed);
    r.number("flow", "coflow_constant_a", c.coflow_constant_a);

    r.string("output", "dir", c.output_dir);
    return c;
}

// Line numbers of "[section]" headers and "key =" lines, for error context.
std::map<std::string, int> ini_lines(const std::string& text) {
    std::map<std::string, int> lines;
    std::istringstream is(text);
    std::string section;
    int n = 0;
    for (std::string line; std::getline(is, line);) {
        ++n;
        const auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos || line[b] == ';') continue;
        if (line[b] == '[') {
            const auto e = line.find(']', b);
            section = line.substr(b + 1, e == std::string::npos ? std::string::npos : e - b - 1);
            lines.emplace(section, n);
            continue;
        }
        const auto eq = line.find('=', b);
        if (eq == std::string::npos) continue;
        std::string key = line.substr(b, eq - b);
        key.erase(key.find_last_not_of(" \t") + 1);
        lines.emplace(section + "." + key, n);
    }
    return lines;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

std::string to_string(DtPolicy p) { return p == DtPolicy::fixed ? "fixed" : "cfl"; }
std::string to_string(Integrator i) { return i == Integrator::rk4 ? "rk4" : "euler"; }

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    const FlowConfig& x = a.flow;
    const FlowConfig& y = b.flow;
    return a.n == b.n && a.lengths == b.lengths && a.initial.generator == b.initial.generator &&
           a.initial.amplitude == b.initial.amplitude && a.initial.seed == b.initial.seed &&
           a.initial.modes == b.initial.modes && x.dt_policy == y.dt_policy && x.dt == y.dt && x.cfl == y.cfl &&
           x.t_end == y.t_end && x.max_steps == y.max_steps && x.order == y.order && x.integrator == y.integrator &&
           x.diagnostic_every == y.diagnostic_every && x.checkpoint_every == y.checkpoint_every &&
           x.degeneration_threshold == y.degeneration_threshold && x.fiber_samples == y.fiber_samples &&
           x.seed == y.seed && a.output_dir == b.output_dir && a.coflow_constant_a == b.coflow_constant_a;
}

void ExperimentConfig::validate() const {
    (void)lattice();
    const std::string& g = initial.generator;
    if (g != "hyperkahler-standard" && g != "t3-invariant" && g != "exact-perturbation")
        throw ValidationError("initial.generator must be one of hyperkahler-standard, t3-invariant, exact-perturbation; got '" +
                              g + "'");
    if (!(initial.amplitude >= 0.0) || !std::isfinite(initial.amplitude))
        throw ValidationError("initial.amplitude must be a finite non-negative number");
    if (initial.modes < 1) throw ValidationError("initial.modes must be >= 1");
    flow.validate();
    if (coflow_constant_a != 0.0)
        throw ValidationError("flow.coflow_constant_a must be 0; only A = 0 descends to the hypersymplectic flow");
}

ExperimentConfig parse_ini(const std::string& text, const std::string& source) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream is(text);
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    const auto lines = ini_lines(text);
    auto line_of = [&](const std::string& k) {
        const auto it = lines.find(k);
        return it == lines.end() ? 0 : it->second;
    };
    Sections sections;
    for (const auto& [name, sec] : tree) {
        if (sec.empty() && !sec.data().empty())
            throw ValidationError(source + ":" + std::to_string(line_of("." + name)) + ": key '" + name +
                                  "' outside of a section");
        Section& out = sections[name];
        for (const auto& [key, leaf] : sec) out[key] = Field{leaf.data(), line_of(name + "." + key), false};
    }
    Reader r(std::move(sections), source);
    ExperimentConfig c = from_reader(r);
    c.validate();
    return c;
}

ExperimentConfig parse_json(const std::string& text, const std::string& source) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(source + ": " + e.what());
    }
    if (!j.is_object()) throw ValidationError(source + ": top level must be an object");
    Sections sections;
    for (const auto& [name, sec] : j.items()) {
        if (!sec.is_object()) throw ValidationError(source + ": section '" + name + "' must be an object");
        Section& out = sections[name];
        for (const auto& [key, v] : sec.items()) {
            Field f;
            if (v.is_string()) {
                f.text = v.get<std::string>();
                f.quoted = true;
            } else if (v.is_number()) {
                f.text = v.dump();
            } else if (v.is_array()) {
                for (const auto& e : v) {
                    if (!e.is_number()) throw ValidationError(source + ": '" + name + "." + key + "' must hold numbers");
                    f.text += (f.text.empty() ? "" : " ") + e.dump();
                }
            } else {
                throw ValidationError(source + ": '" + name + "." + key + "' has an unsupported type");
            }
            out[key] = f;
        }
    }
    // enum-like and path fields are strings in JSON; everything else is numeric
    Reader r(std::move(sections), source);
    for (const char* k : {"generator"})
        if (const Field* f = r.find("initial", k); f && !f->quoted) r.fail(0, std::string("'initial.") + k + "' must be a string");
    for (const char* k : {"dt_policy", "integrator"})
        if (const Field* f = r.find("flow", k); f && !f->quoted) r.fail(0, std::string("'flow.") + k + "' must be a string");
    ExperimentConfig c = from_reader(r);
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error reading config file " + path.string());
    if (path.extension() == ".json") return parse_json(buf.str(), path.string());
    return parse_ini(buf.str(), path.string());
}

nlohmann::json to_json(const ExperimentConfig& c) {
    const FlowConfig& f = c.flow;
    nlohmann::json j;
    j["lattice"] = {{"n", c.n}, {"L", c.lengths}};
    j["initial"] = {{"generator", c.initial.generator},
                    {"amplitude", c.initial.amplitude},
                    {"seed", c.initial.seed},
                    {"modes", c.initial.modes}};
    j["flow"] = {{"dt_policy", to_string(f.dt_policy)},
                 {"dt", f.dt},
                 {"cfl", f.cfl},
                 {"t_end", f.t_end},
                 {"max_steps", f.max_steps},
                 {"order", f.order},
                 {"integrator", to_string(f.integrator)},
                 {"diagnostic_every", f.diagnostic_every},
                 {"checkpoint_every", f.checkpoint_every},
                 {"degeneration_threshold", f.degeneration_threshold},
                 {"fiber_samples", f.fiber_samples},
                 {"seed", f.seed},
                 {"coflow_constant_a", c.coflow_constant_a}};
    j["output"] = {{"dir", c.output_dir}};
    return j;
}

std::string to_ini(const ExperimentConfig& c) {
    const FlowConfig& f = c.flow;
    std::ostringstream os;
    os << "[lattice]\n";
    os << "n = " << c.n[0] << ' ' << c.n[1] << ' ' << c.n[2] << ' ' << c.n[3] << '\n';
    os << "L = " << fmt(c.lengths[0]) << ' ' << fmt(c.lengths[1]) << ' ' << fmt(c.lengths[2]) << ' ' << fmt(c.lengths[3])
       << "\n\n";
    os << "[initial]\n";
    os << "generator = " << c.initial.generator << '\n';
    os << "amplitude = " << fmt(c.initial.amplitude) << '\n';
    os << "seed = " << c.initial.seed << '\n';
    os << "modes = " << c.initial.modes << "\n\n";
    os << "[flow]\n";
    os << "dt_policy = " << to_string(f.dt_policy) << '\n';
    os << "dt = " << fmt(f.dt) << '\n';
    os << "cfl = " << fmt(f.cfl) << '\n';
    os << "t_end = " << fmt(f.t_end) << '\n';
    os << "max_steps = " << f.max_steps << '\n';
    os << "order = " << f.order << '\n';
    os << "integrator = " << to_string(f.integrator) << '\n';
    os << "diagnostic_every = " << f.diagnostic_every << '\n';
    os << "checkpoint_every = " << f.checkpoint_every << '\n';
    os << "degeneration_threshold = " << fmt(f.degeneration_threshold) << '\n';
    os << "fiber_samples = " << f.fiber_samples << '\n';
    os << "seed = " << f.seed << '\n';
    os << "coflow_constant_a = " << fmt(c.coflow_constant_a) << "\n";
    if (!c.output_dir.empty()) os << "\n[output]\ndir = " << c.output_dir << '\n';
    return os.str();
}

std::string canonical_json(const ExperimentConfig& c) {
    nlohmann::json j = to_json(c);
    // where a run is written does not change what it computes
    j.erase("output");
    return j.dump();
}

std::string config_hash(const ExperimentConfig& c) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_json(c))));
    return buf;
}

}  // namespace hsflow
