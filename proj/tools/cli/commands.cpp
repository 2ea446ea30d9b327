#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli.hpp"
#include "format.hpp"
#include "matterwave/analysis.hpp"
#include "matterwave/error.hpp"
#include "matterwave/interferometer.hpp"
#include "matterwave/pulse.hpp"
#include "matterwave/transition_io.hpp"
#include "matterwave/version.hpp"
#include "params.hpp"

namespace matterwave::cli {

namespace {

using Cell = CsvTable::Cell;

struct Context {
    std::string command;
    std::vector<std::string> args;
    ParameterStore store;
    Resolved r;
    std::optional<TransitionCache> cache;
    int n_max_used = 0;
    double truncation = 0.0;

    AnalysisOptions options() {
        AnalysisOptions o = r.options;
        o.cache = cache ? &*cache : nullptr;
        return o;
    }
    void record(int n_max, double difference) {
        n_max_used = std::max(n_max_used, n_max);
        truncation = std::max(truncation, difference);
    }
};

struct Point {
    double delta_tau_us;
    double delta_tau;
    double delta_p;
    double p0;
    double pulse_area;
};

const std::vector<std::string> kSweepable = {"delta_tau", "delta_p", "p0", "pulse_area"};

// Cartesian product over `order` (outermost first). Parameters not listed
// must be scalars.
std::vector<Point> sweep_points(const Context& ctx, const std::vector<std::string>& order) {
    int swept = 0;
    for (const std::string& key : kSweepable) {
        const Axis& a = ctx.r.axis(key);
        const bool allowed = std::find(order.begin(), order.end(), key) != order.end();
        if (a.values.size() > 1 && !allowed) throw ConfigError(key, "cannot be swept by '" + ctx.command + "'");
        if (a.sweep && allowed) ++swept;
    }
    if (swept > 2) throw ConfigError(order.front(), "at most two parameters may be swept per run");

    const UnitSystem& u = ctx.r.units;
    const Axis& tau = ctx.r.delta_tau;
    const auto tau_us = [&](std::size_t i) {
        return tau.microseconds ? tau.given[i] : u.dimensionless_to_microseconds(tau.values[i]);
    };
    std::vector<Point> points{{tau_us(0), ctx.r.delta_tau.scalar(), ctx.r.delta_p.scalar(), ctx.r.p0.scalar(),
                               ctx.r.pulse_area.scalar()}};
    for (const std::string& key : order) {
        const Axis& a = ctx.r.axis(key);
        std::vector<Point> next;
        for (const Point& p : points) {
            for (std::size_t i = 0; i < a.values.size(); ++i) {
                const double v = a.values[i];
                Point q = p;
                if (key == "delta_tau") {
                    q.delta_tau = v;
                    q.delta_tau_us = tau_us(i);
                }
                if (key == "delta_p") q.delta_p = v;
                if (key == "p0") q.p0 = v;
                if (key == "pulse_area") q.pulse_area = v;
                next.push_back(q);
            }
        }
        points = std::move(next);
    }
    return points;
}

DiffractionConfig config_at(const Context& ctx, const Point& p) {
    DiffractionConfig c = ctx.r.config;
    c.delta_tau = p.delta_tau;
    c.p0 = p.p0;
    c.pulse_area = p.pulse_area;
    return c;
}

void require_scalar(const Context& ctx, const std::string& key) {
    if (ctx.r.axis(key).values.size() > 1) throw ConfigError(key, "cannot be swept by '" + ctx.command + "'");
}

std::pair<double, double> parse_range(const std::string& key, const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw ConfigError(key, "expected a range 'lo..hi'");
    const UnitSystem units;
    const double lo = parse_axis(key, text.substr(0, dots), Quantity::Momentum, units).scalar();
    const double hi = parse_axis(key, text.substr(dots + 2), Quantity::Momentum, units).scalar();
    if (!(hi > lo)) throw ConfigError(key, "range must have positive length");
    return {lo, hi};
}

InternalState parse_state(const std::string& key, const std::string& text) {
    return require_choice(key, text, {"g", "e"}) == "g" ? InternalState::Ground : InternalState::Excited;
}

const char* state_label(InternalState s) { return s == InternalState::Ground ? "g" : "e"; }

double to_us(const Context& ctx, double tau) {
    const Axis& a = ctx.r.delta_tau;
    if (a.microseconds) {
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            if (a.values[i] == tau) return a.given[i];
        }
    }
    return ctx.r.units.dimensionless_to_microseconds(tau);
}

std::vector<std::string> point_columns() {
    return {"delta_tau_us", "delta_tau_dimless", "delta_p_hbark", "p0_hbark", "pulse_area_rad", "epsilon"};
}

std::vector<Cell> point_cells(const Context& ctx, const Point& p) {
    const DiffractionConfig c = config_at(ctx, p);
    return {p.delta_tau_us, p.delta_tau, p.delta_p, p.p0, p.pulse_area, c.regime_parameter()};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<Cell> concat(std::vector<Cell> a, const std::vector<Cell>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// ---- subcommands ---------------------------------------------------------

CsvTable cmd_transition(Context& ctx) {
    for (const auto& key : kSweepable) require_scalar(ctx, key);
    const DiffractionConfig& c = ctx.r.config;
    const int s = ctx.r.options.samples_per_hbark;
    Preparation prep = default_preparation(c);
    if (const auto st = ctx.store.get("input_state")) prep.state = parse_state("input_state", *st);
    if (prep.state == InternalState::Excited && !c.has_excited_state()) {
        throw ConfigError("input_state", "Bragg diffraction has no excited state");
    }
    double lo = c.p0 + prep.order - 0.5;
    double hi = c.p0 + prep.order + 0.5;
    if (const auto range = ctx.store.get("p_range")) std::tie(lo, hi) = parse_range("p_range", *range);
    const InputBlock block = InputBlock::covering(lo, hi, s, prep.state);
    if (block.count == 0) throw ConfigError("p_range", "contains no grid sample");

    const TransitionFunction g = obtain_transition(c, std::span(&block, 1), ctx.options());
    ctx.record(g.n_max_used(), g.max_truncation_difference());
    if (const auto path = ctx.store.get("mwtf")) save_transition(*path, g);

    CsvTable t({"p_i_hbark", "state_i", "n", "p_f_hbark", "state_f", "re", "im", "probability"});
    std::vector<InternalState> states{InternalState::Ground};
    if (c.has_excited_state()) states.push_back(InternalState::Excited);
    for (int j = block.first; j <= block.last(); ++j) {
        const ColumnView col = g.require_column(j, prep.state);
        for (InternalState sf : states) {
            for (int n = -g.n_store(); n <= g.n_store(); ++n) {
                const cplx a = col.amplitude(sf, n);
                t.add_row({g.momentum(j), std::string(state_label(prep.state)), static_cast<long long>(n),
                           g.momentum(j + n * s), std::string(state_label(sf)), a.real(), a.imag(), std::norm(a)});
            }
        }
    }
    t.add_meta("pulse_kind", std::string(to_string(g.pulse_kind())));
    t.add_meta("input_state", state_label(prep.state));
    t.add_meta("p_i_first_hbark", g.momentum(block.first));
    t.add_meta("p_i_last_hbark", g.momentum(block.last()));
    t.add_meta("n_store", std::to_string(g.n_store()));
    return t;
}

CsvTable cmd_diffract(Context& ctx) {
    for (const auto& key : kSweepable) require_scalar(ctx, key);
    const DiffractionConfig& c = ctx.r.config;
    const DiffractionResult d = diffract(c, ctx.r.delta_p.scalar(), ctx.options());
    ctx.record(d.n_max_used, d.truncation_difference);

    CsvTable t({"p_hbark", "initial_density", "final_g_re", "final_g_im", "final_e_re", "final_e_im",
                "final_density"});
    const int first = std::min(d.initial.first_index(), d.final.first_index());
    const int last = std::max(d.initial.last_index(), d.final.last_index());
    for (int j = first; j <= last; ++j) {
        const cplx g = d.final.value(InternalState::Ground, j);
        const cplx e = d.final.value(InternalState::Excited, j);
        const double in = std::norm(d.initial.value(InternalState::Ground, j)) +
                          std::norm(d.initial.value(InternalState::Excited, j));
        t.add_row({d.final.momentum(j), in, g.real(), g.imag(), e.real(), e.imag(), std::norm(g) + std::norm(e)});
    }
    t.add_meta("norm_initial", d.initial.norm());
    t.add_meta("norm_final", d.final.norm());
    t.add_meta("efficiency", d.final.integrate(efficiency_target(c.p0)));
    return t;
}

CsvTable cmd_width(Context& ctx) {
    WidthOptions w;
    const std::string mode = require_choice("width_mode", ctx.store.get("width_mode").value_or("all"),
                                            {"all", "central"});
    w.mode = mode == "all" ? WidthMode::AllPeaks : WidthMode::CentralPeak;
    w.fine_samples = parse_int("fine_samples", ctx.store.get("fine_samples").value_or("1024"));
    if (const auto h = ctx.store.get("half_range")) w.half_range = parse_double("half_range", *h);

    CsvTable t(concat(point_columns(), {"width_hbark", "peak", "peak_position_hbark", "truncated", "n_max_used"}));
    for (const Point& p : sweep_points(ctx, {"delta_tau", "p0"})) {
        const WidthResult res = resonance_width(config_at(ctx, p), ctx.options(), w);
        ctx.record(res.n_max_used, res.truncation_difference);
        t.add_row(concat(point_cells(ctx, p),
                         {res.fwhm.width, res.fwhm.peak, res.fwhm.peak_position,
                          static_cast<long long>(res.fwhm.truncated), static_cast<long long>(res.n_max_used)}));
    }
    t.add_meta("width_mode", mode);
    t.add_meta("fine_samples", std::to_string(w.fine_samples));
    return t;
}

CsvTable cmd_efficiency(Context& ctx) {
    std::optional<std::pair<double, double>> target;
    if (const auto tg = ctx.store.get("target")) target = parse_range("target", *tg);
    CsvTable t(concat(point_columns(), {"efficiency", "n_max_used", "truncation_difference"}));
    for (const Point& p : sweep_points(ctx, {"delta_tau", "delta_p", "p0", "pulse_area"})) {
        const DiffractionConfig c = config_at(ctx, p);
        std::optional<IntervalSet> set;
        if (target) set = IntervalSet{{target->first, target->second}};
        const ScalarResult e = efficiency(c, p.delta_p, ctx.options(), set);
        ctx.record(e.n_max_used, e.truncation_difference);
        t.add_row(concat(point_cells(ctx, p),
                         {e.value, static_cast<long long>(e.n_max_used), e.truncation_difference}));
    }
    t.add_meta("target", target ? format_number(target->first) + ".." + format_number(target->second)
                                : std::string("p0+0.5..p0+1.5"));
    return t;
}

CsvTable cmd_losses(Context& ctx) {
    CsvTable t(concat(point_columns(), {"losses", "n_max_used", "truncation_difference"}));
    for (const Point& p : sweep_points(ctx, {"delta_tau", "delta_p", "p0", "pulse_area"})) {
        const DiffractionConfig c = config_at(ctx, p);
        const PulseKind kind = classify_pulse_area(c.pulse_area);
        if (kind == PulseKind::Custom) throw ConfigError("pulse_area", "losses need a beam splitter or mirror area");
        const ScalarResult l = losses(c, p.delta_p, kind, ctx.options());
        ctx.record(l.n_max_used, l.truncation_difference);
        t.add_row(concat(point_cells(ctx, p),
                         {l.value, static_cast<long long>(l.n_max_used), l.truncation_difference}));
    }
    return t;
}

CsvTable cmd_populations(Context& ctx) {
    CsvTable t(concat(point_columns(), {"p_minus", "p_zero", "p_plus", "p_other", "total", "n_max_used",
                                        "truncation_difference"}));
    for (const Point& p : sweep_points(ctx, {"delta_tau", "delta_p", "p0", "pulse_area"})) {
        const Populations pop = populations(config_at(ctx, p), p.delta_p, ctx.options());
        ctx.record(pop.n_max_used, pop.truncation_difference);
        t.add_row(concat(point_cells(ctx, p), {pop.minus, pop.zero, pop.plus, pop.other, pop.total(),
                                               static_cast<long long>(pop.n_max_used), pop.truncation_difference}));
    }
    return t;
}

CsvTable cmd_optimal_area(Context& ctx) {
    CsvTable t({"delta_tau_us", "delta_tau_dimless", "p0_hbark", "two_photon_detuning", "optimal_area_rad",
                "optimal_area_pi", "transfer"});
    for (const Point& p : sweep_points(ctx, {"delta_tau", "p0"})) {
        DiffractionConfig c = config_at(ctx, p);
        const OptimalArea opt = optimal_pulse_area(c, ctx.options());
        t.add_row({p.delta_tau_us, p.delta_tau, p.p0, resonance_detuning(c.mechanism, p.p0), opt.area,
                   opt.area / constants::pi, opt.transfer});
    }
    t.add_meta("area_convention_used", "single");
    return t;
}

CsvTable cmd_transition_scan(Context& ctx) {
    require_scalar(ctx, "delta_tau");
    require_scalar(ctx, "pulse_area");
    const TransitionScan scan =
        transition_scan(ctx.r.config, ctx.r.p0.values, ctx.r.delta_p.values, ctx.options());
    CsvTable t({"p0_hbark", "delta_p_hbark", "efficiency", "optimal_area_rad", "width_hbark", "n_max_used"});
    for (std::size_t i = 0; i < scan.p0.size(); ++i) {
        ctx.record(scan.n_max_used[i], scan.truncation_difference[i]);
        for (std::size_t k = 0; k < scan.delta_p.size(); ++k) {
            t.add_row({scan.p0[i], scan.delta_p[k], scan.at(i, k), scan.optimal_area[i], scan.width[i],
                       static_cast<long long>(scan.n_max_used[i])});
        }
    }
    t.add_meta("area_convention_used", "single");
    return t;
}

int phase_samples(const Context& ctx) {
    return parse_int("phase_samples", ctx.store.get("phase_samples").value_or("64"));
}

CsvTable cmd_interferometer(Context& ctx) {
    for (const auto& key : kSweepable) require_scalar(ctx, key);
    const InterferogramResult r = signal(ctx.r.config, ctx.r.delta_p.scalar(), phase_samples(ctx), ctx.options());
    ctx.record(r.n_max_used, r.truncation_difference);
    CsvTable t({"phase_rad", "intensity"});
    for (std::size_t k = 0; k < r.phases.size(); ++k) t.add_row({r.phases[k], r.intensities[k]});
    t.add_meta("amplitude", r.amplitude);
    t.add_meta("contrast", r.contrast);
    t.add_meta("fit_residual", r.fit_residual);
    t.add_meta("fit_phase_rad", r.fit_phase);
    return t;
}

CsvTable cmd_map(Context& ctx, bool amplitude) {
    require_scalar(ctx, "p0");
    require_scalar(ctx, "pulse_area");
    const InterferometerMap m = interferometer_map(ctx.r.config, ctx.r.delta_p.values, ctx.r.delta_tau.values,
                                                   phase_samples(ctx), ctx.options());
    const char* channel = amplitude ? "amplitude" : "contrast";
    CsvTable t({"delta_p_hbark", "delta_tau_us", "delta_tau_dimless", channel, "n_max_used"});
    for (std::size_t i = 0; i < m.delta_p.size(); ++i) {
        for (std::size_t j = 0; j < m.delta_tau.size(); ++j) {
            const std::size_t idx = m.index(i, j);
            ctx.record(m.n_max_used[idx], 0.0);
            t.add_row({m.delta_p[i], to_us(ctx, m.delta_tau[j]), m.delta_tau[j],
                       amplitude ? m.amplitude[idx] : m.contrast[idx], static_cast<long long>(m.n_max_used[idx])});
        }
    }
    return t;
}

struct Command {
    const char* name;
    const char* help;
    CsvTable (*fn)(Context&);
};

const std::vector<Command>& commands() {
    static const std::vector<Command> list = {
        {"transition", "Build a transition function G(p_f, p_i) and list its elements", cmd_transition},
        {"diffract", "Diffract a Gaussian wave packet with one pulse", cmd_diffract},
        {"width", "Resonance width (FWHM) of a mirror pulse", cmd_width},
        {"efficiency", "Diffraction efficiency into [p0+1/2, p0+3/2]", cmd_efficiency},
        {"losses", "Losses outside the beam-splitter or mirror interval", cmd_losses},
        {"populations", "Populations of the -1, 0, +1 and remaining orders", cmd_populations},
        {"optimal-area", "Pulse area maximizing the p0 -> p0+1 transfer", cmd_optimal_area},
        {"transition-scan", "Efficiency map of tuned mirrors over (p0, delta_p)", cmd_transition_scan},
        {"interferometer", "Mach-Zehnder interferogram, amplitude and contrast", cmd_interferometer},
        {"amplitude-map", "Interferometer amplitude over (delta_p, delta_tau)",
         [](Context& c) { return cmd_map(c, true); }},
        {"contrast-map", "Interferometer contrast over (delta_p, delta_tau)",
         [](Context& c) { return cmd_map(c, false); }},
    };
    return list;
}

std::string kebab(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

void add_header(CsvTable& table, const Context& ctx) {
    const UnitSystem& u = ctx.r.units;
    std::vector<std::pair<std::string, std::string>> meta;
    meta.emplace_back("matterwave_version", kVersion);
    meta.emplace_back("command", ctx.command);
    for (const auto& entry : ctx.r.echo) meta.push_back(entry);
    meta.emplace_back("atom", u.preset().name);
    meta.emplace_back("atom_mass_kg", format_number(u.preset().mass_kg));
    meta.emplace_back("wavelength_m", format_number(u.preset().wavelength_m));
    meta.emplace_back("omega_k_rad_per_s", format_number(u.recoil_frequency()));
    meta.emplace_back("time_unit_us", format_number(u.dimensionless_to_microseconds(1.0)));
    if (ctx.r.delta_tau.values.size() == 1) {
        meta.emplace_back("delta_tau_dimless", format_number(ctx.r.delta_tau.scalar()));
        meta.emplace_back("delta_tau_us", format_number(to_us(ctx, ctx.r.delta_tau.scalar())));
        if (ctx.r.pulse_area.values.size() == 1) {
            meta.emplace_back("epsilon", format_number(ctx.r.config.regime_parameter()));
        }
    }
    meta.emplace_back("n_max_used", std::to_string(ctx.n_max_used));
    meta.emplace_back("max_truncation_difference", format_number(ctx.truncation));
    table.prepend_meta(meta);
}

void write_manifest(const std::filesystem::path& path, const Context& ctx, const CsvTable& table,
                    const std::optional<std::string>& output) {
    nlohmann::ordered_json m;
    m["matterwave_version"] = kVersion;
    m["command"] = ctx.command;
    m["arguments"] = ctx.args;
    nlohmann::ordered_json params;
    for (const auto& [key, value] : ctx.r.echo) params[key] = value;
    m["parameters"] = params;
    m["output"] = output ? nlohmann::ordered_json(*output) : nlohmann::ordered_json("-");
    m["columns"] = table.columns();
    m["rows"] = table.rows();
    m["n_max_used"] = ctx.n_max_used;
    m["max_truncation_difference"] = ctx.truncation;
    if (ctx.cache) {
        m["cache"] = {{"directory", ctx.cache->directory().string()},
                      {"hits", ctx.cache->hits()},
                      {"misses", ctx.cache->misses()}};
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("manifest", "cannot write " + path.string());
    out << m.dump(2) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Raman and Bragg diffraction of matter waves", "matterwave"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    struct Flags {
        std::string config;
        std::string output;
        std::string manifest;
        std::map<std::string, std::string> values;
    };
    std::map<std::string, Flags> flags;
    std::map<std::string, std::map<std::string, CLI::Option*>> options;
    for (const Command& cmd : commands()) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        Flags& f = flags[cmd.name];
        sub->add_option("--config", f.config, "JSON file with parameter values (flags override it)");
        sub->add_option("-o,--output", f.output, "CSV output path (default: standard output)");
        sub->add_option("--manifest", f.manifest, "Run manifest path (default: <output>.manifest.json)");
        for (const std::string& key : known_keys()) {
            options[cmd.name][key] = sub->add_option("--" + kebab(key), f.values[key]);
        }
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        err << app.help();
        return kExitConfig;
    }

    const Command* selected = nullptr;
    for (const Command& cmd : commands()) {
        if (app.got_subcommand(cmd.name)) selected = &cmd;
    }
    Context ctx;
    ctx.command = selected->name;
    ctx.args = args;
    const Flags& f = flags[ctx.command];
    try {
        if (!f.config.empty()) ctx.store.load_json(f.config);
        for (const std::string& key : known_keys()) {
            if (options[ctx.command][key]->count() > 0) ctx.store.set(key, f.values.at(key), "flag");
        }
        ctx.r = resolve(ctx.store);
        if (ctx.r.cache_dir) ctx.cache.emplace(*ctx.r.cache_dir);

        CsvTable table = selected->fn(ctx);
        add_header(table, ctx);
        std::optional<std::string> output;
        if (!f.output.empty()) {
            output = f.output;
            std::ofstream file(f.output, std::ios::binary | std::ios::trunc);
            if (!file) throw ConfigError("output", "cannot write " + f.output);
            table.write(file);
            if (!file) throw ConfigError("output", "write failed for " + f.output);
        } else {
            table.write(out);
        }
        std::string manifest = f.manifest;
        if (manifest.empty() && output) manifest = *output + ".manifest.json";
        if (!manifest.empty()) write_manifest(manifest, ctx, table, output);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "matterwave " << ctx.command << ": configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "matterwave " << ctx.command << ": " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "matterwave " << ctx.command << ": numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace matterwave::cli
