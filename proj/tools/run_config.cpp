#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vncs/errors.hpp"

namespace vncs::cli {

namespace {

class Reader {
public:
    explicit Reader(Document doc) : doc_(std::move(doc)) {}

    const Value* find(const std::string& key) {
        auto it = doc_.find(key);
        if (it == doc_.end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }
    bool has(const std::string& key) const { return doc_.count(key) > 0; }

    void number(const std::string& key, double& out) {
        if (const Value* v = find(key)) out = as_number(key, *v);
    }
    void integer(const std::string& key, int& out) {
        if (const Value* v = find(key)) out = as_int(key, *v);
    }
    void boolean(const std::string& key, bool& out) {
        if (const Value* v = find(key)) {
            if (v->kind != Value::Kind::Bool) throw ConfigError(key, "must be true or false");
            out = v->boolean;
        }
    }
    void text(const std::string& key, std::string& out) {
        if (const Value* v = find(key)) {
            if (v->kind != Value::Kind::String) throw ConfigError(key, "must be a string");
            out = v->text;
        }
    }
    void numbers(const std::string& key, std::vector<double>& out) {
        if (const Value* v = find(key)) {
            out.clear();
            if (v->is_number()) {
                out.push_back(v->as_double());
                return;
            }
            for (const auto& item : array(key, *v)) out.push_back(as_number(key, item));
        }
    }
    void integers(const std::string& key, std::vector<int>& out) {
        if (const Value* v = find(key)) {
            out.clear();
            if (v->kind == Value::Kind::Integer) {
                out.push_back(as_int(key, *v));
                return;
            }
            for (const auto& item : array(key, *v)) out.push_back(as_int(key, item));
        }
    }
    template <class F>
    void rows(const std::string& key, F&& per_row) {
        if (const Value* v = find(key))
            for (const auto& row : array(key, *v)) {
                std::vector<double> values;
                for (const auto& item : array(key, row)) values.push_back(as_number(key, item));
                per_row(values);
            }
    }

    void reject_unknown() const {
        for (const auto& [key, v] : doc_)
            if (!used_.count(key)) throw ConfigError(key, "unknown key");
    }

private:
    static double as_number(const std::string& key, const Value& v) {
        if (!v.is_number()) throw ConfigError(key, "must be a number");
        return v.as_double();
    }
    static int as_int(const std::string& key, const Value& v) {
        if (v.kind != Value::Kind::Integer) throw ConfigError(key, "must be an integer");
        return static_cast<int>(v.integer);
    }
    static const std::vector<Value>& array(const std::string& key, const Value& v) {
        if (v.kind != Value::Kind::Array) throw ConfigError(key, "must be an array");
        return v.items;
    }

    Document doc_;
    std::set<std::string> used_;
};

// Scan-spec validation reports its own key names; translate them to file keys.
std::string file_key(const std::string& key, bool dressed) {
    if (key == "omega_min") return dressed ? "scan.omega_min_dressed" : "scan.omega_min_ev";
    if (key == "omega_max") return dressed ? "scan.omega_max_dressed" : "scan.omega_max_ev";
    if (key == "omega_count") return "scan.omega_count";
    if (key == "theta_mrad") return "scan.theta_mrad";
    if (key == "points_per_cycle" || key == "max_refinements") return "quadrature." + key;
    if (key == "quadrature_tolerance") return "quadrature.tolerance";
    return key;
}

void check_helicity(const std::string& key, int h) {
    if (h != 1 && h != -1) throw ConfigError(key, "helicity must be ±1");
}

std::string list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
    return s + "]";
}

std::string list(const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "]";
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

}  // namespace

LaserConfig RunConfig::laser() const {
    LaserConfig l;
    l.omega1_ev = omega1_ev;
    l.n_cycle = n_cycle;
    for (std::size_t j = 0; j < harmonics.size(); ++j)
        l.modes.push_back({harmonics[j], a0[j], helicity[j], cep_rad[j]});
    return l;
}

ScanSpec RunConfig::scan_spec() const {
    ScanSpec s;
    s.laser = laser();
    s.electron_energy_ev = electron_energy_ev;
    s.spin_in = spin_in;
    s.photon_helicity = photon_helicity;
    s.omega = {omega_min, omega_max, omega_count, omega_dressed};
    for (double t : theta_mrad) s.thetas.push_back(t * 1e-3);
    s.n_phi = n_phi;
    s.n_max = n_max;
    s.quadrature = quadrature;
    s.emission_floor = emission_floor;
    s.workers = workers;
    return s;
}

std::vector<bool> RunConfig::profile_on_grid() const {
    const ScanSpec spec = scan_spec();
    std::vector<bool> out;
    for (const auto& p : profile_points) {
        bool hit = false;
        for (std::size_t t = 0; t < spec.thetas.size() && !hit; ++t) {
            if (std::abs(theta_mrad[t] - p.theta_mrad) > 1e-12 * std::abs(p.theta_mrad)) continue;
            for (int i = 0; i < omega_count && !hit; ++i)
                hit = std::abs(spec.omega_at(i, spec.thetas[t]) - p.omega_ev) <= 1e-9 * p.omega_ev;
        }
        out.push_back(hit);
    }
    return out;
}

RunConfig parse_config(const std::string& text, const std::vector<std::pair<std::string, std::string>>& overrides) {
    Document doc = parse_document(text);
    for (const auto& [key, value] : overrides) {
        try {
            doc[key] = parse_value(value);
        } catch (const ConfigError& e) {
            throw ConfigError(key, std::string("cannot parse override value: ") + e.what());
        }
    }
    Reader r(std::move(doc));
    RunConfig c;

    if (!r.has("electron_energy_ev")) throw ConfigError("electron_energy_ev", "required key is missing");
    r.number("electron_energy_ev", c.electron_energy_ev);
    r.integer("spin_in", c.spin_in);
    r.integer("photon_helicity", c.photon_helicity);
    r.integer("n_phi", c.n_phi);
    r.integer("n_max", c.n_max);
    r.number("emission_floor", c.emission_floor);
    r.integer("workers", c.workers);
    r.text("output_dir", c.output_dir);

    r.number("laser.omega1_ev", c.omega1_ev);
    r.integer("laser.n_cycle", c.n_cycle);
    for (const char* key : {"laser.harmonics", "laser.a0", "laser.helicity"})
        if (!r.has(key)) throw ConfigError(key, "required key is missing");
    r.integers("laser.harmonics", c.harmonics);
    r.numbers("laser.a0", c.a0);
    r.integers("laser.helicity", c.helicity);
    c.cep_rad.assign(c.harmonics.size(), 0.0);
    r.numbers("laser.cep_rad", c.cep_rad);
    if (c.harmonics.empty()) throw ConfigError("laser.harmonics", "at least one laser mode is required");
    if (c.a0.size() != c.harmonics.size()) throw ConfigError("laser.a0", "needs one entry per harmonic");
    if (c.helicity.size() != c.harmonics.size()) throw ConfigError("laser.helicity", "needs one entry per harmonic");
    if (c.cep_rad.size() != c.harmonics.size()) throw ConfigError("laser.cep_rad", "needs one entry per harmonic");
    for (int h : c.helicity) check_helicity("laser.helicity", h);
    check_helicity("photon_helicity", c.photon_helicity);
    if (c.spin_in != 1 && c.spin_in != -1) throw ConfigError("spin_in", "electron helicity must be ±1");

    const bool ev = r.has("scan.omega_min_ev") || r.has("scan.omega_max_ev");
    const bool dressed = r.has("scan.omega_min_dressed") || r.has("scan.omega_max_dressed");
    if (ev && dressed)
        throw ConfigError("scan.omega_min_ev", "give the omega range either in eV or in dressed units, not both");
    if (ev) {
        if (!r.has("scan.omega_min_ev") || !r.has("scan.omega_max_ev"))
            throw ConfigError("scan.omega_max_ev", "omega_min_ev and omega_max_ev must be given together");
        c.omega_dressed = false;
        r.number("scan.omega_min_ev", c.omega_min);
        r.number("scan.omega_max_ev", c.omega_max);
    } else {
        r.number("scan.omega_min_dressed", c.omega_min);
        r.number("scan.omega_max_dressed", c.omega_max);
    }
    r.integer("scan.omega_count", c.omega_count);
    r.numbers("scan.theta_mrad", c.theta_mrad);
    r.rows("scan.a0_ladder", [&](const std::vector<double>& row) { c.a0_ladder.push_back(row); });
    for (const auto& row : c.a0_ladder)
        if (row.size() != c.harmonics.size()) throw ConfigError("scan.a0_ladder", "each entry needs one a0 per harmonic");

    r.integer("quadrature.points_per_cycle", c.quadrature.points_per_cycle);
    r.number("quadrature.tolerance", c.quadrature.tolerance);
    r.integer("quadrature.max_refinements", c.quadrature.max_refinements);

    r.boolean("profile.emit", c.profile_emit);
    r.boolean("profile.images", c.profile_images);
    r.integer("profile.radial", c.profile_radial);
    r.integer("profile.azimuthal", c.profile_azimuthal);
    r.rows("profile.points", [&](const std::vector<double>& row) {
        if (row.size() != 2) throw ConfigError("profile.points", "each point is [omega_ev, theta_mrad]");
        c.profile_points.push_back({row[0], row[1]});
    });
    r.reject_unknown();

    if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
    if (c.profile_radial < 2) throw ConfigError("profile.radial", "must be at least 2");
    if (c.profile_azimuthal < 3) throw ConfigError("profile.azimuthal", "must be at least 3");
    for (const auto& p : c.profile_points)
        if (!(p.omega_ev > 0.0) || !(p.theta_mrad > 0.0))
            throw ConfigError("profile.points", "photon energy and angle must be positive");
    try {
        c.scan_spec().validate();
        for (const auto& row : c.a0_ladder) {
            RunConfig step = c;
            step.a0 = row;
            step.scan_spec().validate();
        }
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        throw ConfigError(file_key(e.key(), c.omega_dressed), what.substr(e.key().size() + 2));
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("--config", "cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), overrides);
}

std::string echo_config(const RunConfig& c) {
    std::ostringstream o;
    o << "electron_energy_ev = " << format_double(c.electron_energy_ev) << "\n";
    o << "spin_in = " << c.spin_in << "\n";
    o << "photon_helicity = " << c.photon_helicity << "\n";
    o << "n_phi = " << c.n_phi << "\n";
    o << "n_max = " << c.n_max << "\n";
    o << "emission_floor = " << format_double(c.emission_floor) << "\n";
    o << "workers = " << c.workers << "\n";
    o << "output_dir = " << quoted(c.output_dir) << "\n";
    o << "\n[laser]\n";
    o << "omega1_ev = " << format_double(c.omega1_ev) << "\n";
    o << "n_cycle = " << c.n_cycle << "\n";
    o << "harmonics = " << list(c.harmonics) << "\n";
    o << "a0 = " << list(c.a0) << "\n";
    o << "helicity = " << list(c.helicity) << "\n";
    o << "cep_rad = " << list(c.cep_rad) << "\n";
    o << "\n[scan]\n";
    const char* unit = c.omega_dressed ? "dressed" : "ev";
    o << "omega_min_" << unit << " = " << format_double(c.omega_min) << "\n";
    o << "omega_max_" << unit << " = " << format_double(c.omega_max) << "\n";
    o << "omega_count = " << c.omega_count << "\n";
    o << "theta_mrad = " << list(c.theta_mrad) << "\n";
    if (!c.a0_ladder.empty()) {
        o << "a0_ladder = [";
        for (std::size_t i = 0; i < c.a0_ladder.size(); ++i) o << (i ? ", " : "") << list(c.a0_ladder[i]);
        o << "]\n";
    }
    o << "\n[quadrature]\n";
    o << "points_per_cycle = " << c.quadrature.points_per_cycle << "\n";
    o << "tolerance = " << format_double(c.quadrature.tolerance) << "\n";
    o << "max_refinements = " << c.quadrature.max_refinements << "\n";
    o << "\n[profile]\n";
    o << "emit = " << (c.profile_emit ? "true" : "false") << "\n";
    o << "images = " << (c.profile_images ? "true" : "false") << "\n";
    o << "radial = " << c.profile_radial << "\n";
    o << "azimuthal = " << c.profile_azimuthal << "\n";
    if (!c.profile_points.empty()) {
        o << "points = [";
        for (std::size_t i = 0; i < c.profile_points.size(); ++i)
            o << (i ? ", " : "") << "[" << format_double(c.profile_points[i].omega_ev) << ", "
              << format_double(c.profile_points[i].theta_mrad) << "]";
        o << "]\n";
    }
    return o.str();
}

}  // namespace vncs::cli
