#include "params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "format.hpp"
#include "matterwave/error.hpp"

namespace matterwave::cli {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Token {
    double value;
    bool suffixed;
};

// One number with an optional unit suffix.
Token parse_token(const std::string& key, std::string text, Quantity quantity) {
    text = trim(text);
    std::string suffix;
    switch (quantity) {
        case Quantity::Time: suffix = "us"; break;
        case Quantity::Momentum: suffix = "hbark"; break;
        case Quantity::Angle: suffix = "pi"; break;
        case Quantity::Plain: break;
    }
    bool suffixed = false;
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (!suffix.empty() && ends_with(lower, suffix)) {
        suffixed = true;
        text = trim(text.substr(0, text.size() - suffix.size()));
        if (quantity == Quantity::Angle && text.empty()) text = "1";
    }
    return {parse_double(key, text), suffixed};
}

}  // namespace

int parse_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) throw ConfigError(key, "expected an integer, got '" + text + "'");
    return value;
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(value)) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
    return value;
}

std::string require_choice(const std::string& key, const std::string& text, const std::vector<std::string>& choices) {
    std::string lower = trim(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (std::find(choices.begin(), choices.end(), lower) != choices.end()) return lower;
    std::string list;
    for (const auto& c : choices) list += (list.empty() ? "" : "|") + c;
    throw ConfigError(key, "expected one of " + list + ", got '" + text + "'");
}

Axis parse_axis(const std::string& key, const std::string& text, Quantity quantity, const UnitSystem& units) {
    Axis axis{key, text, {}, {}, false, false};
    std::vector<Token> tokens;
    const auto range = text.find("..");
    if (range != std::string::npos) {
        // a..b:count[:log]
        const std::string lo_text = text.substr(0, range);
        std::string rest = text.substr(range + 2);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw ConfigError(key, "sweep needs a count: 'a..b:count'");
        const std::string hi_text = rest.substr(0, colon);
        std::string count_text = rest.substr(colon + 1);
        bool log = false;
        if (const auto c2 = count_text.find(':'); c2 != std::string::npos) {
            if (trim(count_text.substr(c2 + 1)) != "log") throw ConfigError(key, "unknown sweep spacing");
            log = true;
            count_text = count_text.substr(0, c2);
        }
        const int count = parse_int(key, count_text);
        if (count < 1) throw ConfigError(key, "sweep count must be positive");
        Token lo = parse_token(key, lo_text, quantity);
        Token hi = parse_token(key, hi_text, quantity);
        // A suffix on either end applies to both.
        lo.suffixed = hi.suffixed = lo.suffixed || hi.suffixed;
        if (count > 1 && !(hi.value > lo.value)) throw ConfigError(key, "sweep must have positive length");
        if (log && !(lo.value > 0.0)) throw ConfigError(key, "logarithmic sweep needs positive bounds");
        for (int i = 0; i < count; ++i) {
            const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
            double v = log ? lo.value * std::pow(hi.value / lo.value, t) : lo.value + t * (hi.value - lo.value);
            if (i == count - 1) v = hi.value;
            tokens.push_back({v, lo.suffixed});
        }
        axis.sweep = true;
    } else if (text.find(',') != std::string::npos) {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto comma = text.find(',', start);
            tokens.push_back(parse_token(key, text.substr(start, comma - start), quantity));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        axis.sweep = true;
    } else {
        tokens.push_back(parse_token(key, text, quantity));
    }

    const bool any_suffix = std::any_of(tokens.begin(), tokens.end(), [](const Token& t) { return t.suffixed; });
    const bool all_suffix = std::all_of(tokens.begin(), tokens.end(), [](const Token& t) { return t.suffixed; });
    if (quantity == Quantity::Time && any_suffix != all_suffix) {
        throw ConfigError(key, "mixes microseconds and dimensionless times");
    }
    for (const Token& t : tokens) {
        double v = t.value;
        if (quantity == Quantity::Time && t.suffixed) v = units.microseconds_to_dimensionless(v);
        if (quantity == Quantity::Angle && t.suffixed) v *= constants::pi;
        axis.values.push_back(v);
        axis.given.push_back(t.value);
    }
    axis.microseconds = quantity == Quantity::Time && all_suffix;
    return axis;
}

void ParameterStore::set(const std::string& key, std::string value, std::string origin) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(key, "unknown parameter");
    values_[key] = std::move(value);
    origins_[key] = std::move(origin);
}

std::optional<std::string> ParameterStore::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

void ParameterStore::load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config", "top level must be an object");
    for (const auto& [key, value] : doc.items()) {
        std::string text;
        if (value.is_string()) {
            text = value.get<std::string>();
        } else if (value.is_number_integer()) {
            text = std::to_string(value.get<long long>());
        } else if (value.is_number()) {
            text = format_number(value.get<double>());
        } else if (value.is_boolean()) {
            text = value.get<bool>() ? "true" : "false";
        } else {
            throw ConfigError(key, "config values must be strings or numbers");
        }
        set(key, text, "config");
    }
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "mechanism",     "geometry",       "delta_tau",    "pulse_area",    "pulse",
        "p0",            "two_photon_detuning", "n_max",   "time_window_factor", "envelope",
        "area_convention", "delta_p",      "rel_tol",      "abs_tol",       "max_step",
        "convergence_norm_tol", "samples_per_hbark", "threads", "cache_dir", "packet_cutoff",
        "atom_mass_kg",  "wavelength_m",   "phase_samples", "width_mode",   "fine_samples",
        "half_range",    "input_state",    "p_range",      "target",        "mwtf"};
    return keys;
}

const Axis& Resolved::axis(const std::string& key) const {
    if (key == "delta_tau") return delta_tau;
    if (key == "delta_p") return delta_p;
    if (key == "p0") return p0;
    if (key == "pulse_area") return pulse_area;
    throw ConfigError(key, "not a sweepable parameter");
}

Resolved resolve(const ParameterStore& store) {
    Resolved r;
    auto text = [&](const std::string& key, const std::string& fallback) {
        const std::string v = store.get(key).value_or(fallback);
        r.echo.emplace_back(key, v);
        return v;
    };

    AtomPreset preset = rubidium87();
    if (const auto m = store.get("atom_mass_kg")) {
        preset.mass_kg = parse_double("atom_mass_kg", *m);
        preset.name = "custom";
    }
    if (const auto w = store.get("wavelength_m")) {
        preset.wavelength_m = parse_double("wavelength_m", *w);
        preset.name = "custom";
    }
    if (!(preset.mass_kg > 0.0)) throw ConfigError("atom_mass_kg", "must be positive");
    if (!(preset.wavelength_m > 0.0)) throw ConfigError("wavelength_m", "must be positive");
    r.units = UnitSystem(preset);

    DiffractionConfig& c = r.config;
    c.mechanism = require_choice("mechanism", text("mechanism", "bragg"), {"raman", "bragg"}) == "raman"
                      ? Mechanism::Raman
                      : Mechanism::Bragg;
    c.geometry = require_choice("geometry", text("geometry", "single"), {"single", "double"}) == "single"
                     ? Geometry::Single
                     : Geometry::Double;
    c.envelope = require_choice("envelope", text("envelope", "gaussian"), {"gaussian", "box"}) == "gaussian"
                     ? EnvelopeShape::Gaussian
                     : EnvelopeShape::Box;
    if (const auto conv = store.get("area_convention")) {
        r.echo.emplace_back("area_convention", *conv);
        const std::string v = require_choice("area_convention", *conv, {"single", "double", "geometry"});
        if (v == "single") c.area_convention = Geometry::Single;
        if (v == "double") c.area_convention = Geometry::Double;
    }

    r.delta_tau = parse_axis("delta_tau", text("delta_tau", "25us"), Quantity::Time, r.units);
    r.delta_p = parse_axis("delta_p", text("delta_p", "0.05"), Quantity::Momentum, r.units);
    r.p0 = parse_axis("p0", text("p0", "0"), Quantity::Momentum, r.units);
    if (store.has("pulse") && store.has("pulse_area")) {
        throw ConfigError("pulse", "give either pulse or pulse_area, not both");
    }
    if (const auto kind = store.get("pulse")) {
        r.echo.emplace_back("pulse", *kind);
        const std::string k = require_choice("pulse", *kind, {"bs", "mirror"});
        r.pulse_area = parse_axis("pulse_area", k == "bs" ? "0.5pi" : "1pi", Quantity::Angle, r.units);
    } else {
        r.pulse_area = parse_axis("pulse_area", text("pulse_area", "1pi"), Quantity::Angle, r.units);
    }
    for (const Axis* a : {&r.delta_tau, &r.delta_p}) {
        for (double v : a->values) {
            if (!(v > 0.0)) throw ConfigError(a->key, "must be positive");
        }
    }
    for (double v : r.pulse_area.values) {
        if (!(v >= 0.0)) throw ConfigError("pulse_area", "must be non-negative");
    }
    c.delta_tau = r.delta_tau.scalar();
    c.pulse_area = r.pulse_area.scalar();
    c.p0 = r.p0.scalar();
    c.two_photon_detuning = parse_double("two_photon_detuning", text("two_photon_detuning", "1"));
    c.time_window_factor = parse_double("time_window_factor", text("time_window_factor", "5"));
    const std::string n_max = text("n_max", "auto");
    if (n_max != "auto") c.n_max = parse_int("n_max", n_max);
    c.validate();

    SolverSettings& s = r.solver;
    s.rel_tol = parse_double("rel_tol", text("rel_tol", "1e-3"));
    s.abs_tol = parse_double("abs_tol", text("abs_tol", "1e-6"));
    if (const auto v = store.get("max_step")) {
        r.echo.emplace_back("max_step", *v);
        s.max_step = parse_double("max_step", *v);
    }
    if (const auto v = store.get("convergence_norm_tol")) {
        r.echo.emplace_back("convergence_norm_tol", *v);
        s.convergence_norm_tol = parse_double("convergence_norm_tol", *v);
    }
    s.validate();

    AnalysisOptions& o = r.options;
    o.solver = s;
    o.samples_per_hbark = parse_int("samples_per_hbark", text("samples_per_hbark", "256"));
    if (o.samples_per_hbark < 2 || o.samples_per_hbark % 2 != 0) {
        throw ConfigError("samples_per_hbark", "must be even and >= 2");
    }
    const int threads = parse_int("threads", store.get("threads").value_or("0"));
    if (threads < 0) throw ConfigError("threads", "must be >= 0");
    o.threads = static_cast<unsigned>(threads);
    o.packet_cutoff = parse_double("packet_cutoff", text("packet_cutoff", "6"));
    if (!(o.packet_cutoff > 0.0)) throw ConfigError("packet_cutoff", "must be positive");

    if (const auto dir = store.get("cache_dir")) {
        if (!dir->empty()) r.cache_dir = *dir;
    } else if (const char* env = std::getenv("MATTERWAVE_CACHE_DIR"); env != nullptr && *env != '\0') {
        r.cache_dir = env;
    }
    return r;
}

}  // namespace matterwave::cli
