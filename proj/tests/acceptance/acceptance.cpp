// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "matterwave/analysis.hpp"
#include "matterwave/interferometer.hpp"
#include "matterwave/pulse.hpp"
#include "matterwave/solver.hpp"
#include "matterwave/units.hpp"
#include "oracles.hpp"

using namespace matterwave;
namespace fs = std::filesystem;

namespace {

const UnitSystem kUnits;
const double kPi = oracle::kPi;

double us(double microseconds) { return kUnits.microseconds_to_dimensionless(microseconds); }

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [x]");
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}
std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

// Largest truncation difference seen by any reported result.
double g_worst_truncation = 0.0;
void track(double truncation) { g_worst_truncation = std::max(g_worst_truncation, truncation); }

AnalysisOptions defaults() { return AnalysisOptions{}; }

DiffractionConfig pulse(Mechanism m, Geometry g, double tau_us, double area) {
    DiffractionConfig c;
    c.mechanism = m;
    c.geometry = g;
    c.delta_tau = us(tau_us);
    c.pulse_area = area;
    return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict analytic_oracle() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    const SolverSettings tight{1e-10, 1e-12};
    double worst = 0.0;
    for (double p : {0.0, 0.01, -0.03, 0.08})
        for (double area : {kPi / 2, kPi, 1.3 * kPi}) {
            DiffractionConfig c = pulse(Mechanism::Raman, Geometry::Single, 25.0, area);
            c.envelope = EnvelopeShape::Box;
            c.n_max = 3;
            const auto out =
                evolve(AmplitudeState::eigenstate(Mechanism::Raman, 3, p, InternalState::Ground, 0), c, tight);
            const double expected = oracle::rabi_transfer(area / c.delta_tau, 2.0 * p, c.delta_tau);
            worst = std::max(worst, std::abs(out.population(InternalState::Excited, 1) - expected));
            worst = std::max(worst, std::abs(out.population(InternalState::Ground, 0) - (1.0 - expected)));
        }
    const double elapsed = seconds_since(t0);
    v.require(worst < 1e-6, fmt("max deviation %.2e", worst));
    v.require(elapsed < 1.0, fmt("%.3f s", elapsed));
    return v;
}

Verdict unitarity() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(0x5eed2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const SolverSettings settings;
    double worst = 0.0;
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Mechanism m = trial % 2 ? Mechanism::Bragg : Mechanism::Raman;
        const Geometry g = (trial / 2) % 2 ? Geometry::Double : Geometry::Single;
        DiffractionConfig c = pulse(m, g, 12.5 + 187.5 * u(rng), 2.0 * kPi * u(rng));
        c.p0 = u(rng) - 0.5;
        c.two_photon_detuning = resonance_detuning(m, c.p0) + 0.2 * (u(rng) - 0.5);
        const InternalState s =
            m == Mechanism::Raman && u(rng) < 0.5 ? InternalState::Excited : InternalState::Ground;
        const double q = u(rng) - 0.5;
        const auto r = evolve_converged(AmplitudeState::eigenstate(m, kMinAutoOrder, q, s, 0), c, settings);
        track(r.truncation_difference);
        const double drift = std::abs(r.state.norm() - 1.0);
        worst = std::max(worst, drift);
        if (drift > 10.0 * settings.rel_tol) ++violations;
    }
    const double elapsed = seconds_since(t0);
    v.require(violations == 0, fmt("max norm drift %.2e over 200 configs", worst));
    v.require(elapsed < 120.0, fmt("%.1f s", elapsed));
    return v;
}

Verdict spurious_orders() {
    Verdict v;
    const auto c = pulse(Mechanism::Bragg, Geometry::Single, 12.5, kPi);
    const auto r = diffract(c, 0.05, defaults());
    track(r.truncation_difference);
    auto in = [&](int n) { return r.final.integrate(IntervalSet::window(n)); };
    const double pm = in(-1), p0 = in(0), p1 = in(1), p2 = in(2);
    v.require(p1 > std::max({pm, p0, p2}), fmt("P(+1)=%.4f", p1));
    v.require(pm > 1e-3, fmt("P(-1)=%.2e", pm));
    v.require(p0 > 1e-3, fmt("P(0)=%.2e", p0));
    v.require(p2 > 1e-3, fmt("P(+2)=%.2e", p2));
    return v;
}

double width_at(Mechanism m, Geometry g, double tau_us) {
    const auto r = resonance_width(pulse(m, g, tau_us, kPi), defaults());
    track(r.truncation_difference);
    return r.fwhm.width;
}

Verdict resonance_widths() {
    Verdict v;
    bool ordered = true;
    for (Mechanism m : {Mechanism::Raman, Mechanism::Bragg})
        for (double tau : {25.0, 37.5, 50.0, 75.0, 100.0, 150.0, 200.0})
            ordered = ordered && width_at(m, Geometry::Single, tau) > width_at(m, Geometry::Double, tau);
    v.require(ordered, "single > double for tau >= 25us");

    const std::vector<double> taus{50.0, 75.0, 100.0, 150.0, 200.0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double tau : taus) {
        const double x = std::log(tau);
        const double y = std::log(width_at(Mechanism::Raman, Geometry::Single, tau));
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double n = static_cast<double>(taus.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    v.require(std::abs(slope + 1.0) <= 0.1, fmt("single Raman slope %.4f", slope));

    std::vector<double> w;
    for (double tau = 10.0; tau < 25.0; tau += 2.5) w.push_back(width_at(Mechanism::Bragg, Geometry::Double, tau));
    double jump = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) jump = std::max(jump, w[i + 1] - w[i]);
    v.require(jump > 0.0, fmt("double Bragg largest upward jump %.4f hbarK", jump));
    return v;
}

Verdict optimal_area_and_scan() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    for (Mechanism m : {Mechanism::Raman, Mechanism::Bragg}) {
        const auto base = pulse(m, Geometry::Double, 37.5, kPi);
        const auto centre = optimal_pulse_area(base, defaults());
        const double rel = centre.area / (kPi / std::sqrt(2.0)) - 1.0;
        v.require(std::abs(rel) <= 0.02, std::string(to_string(m)) + fmt(" A_opt(0)=%.4fpi", centre.area / kPi));
        auto shifted = base;
        shifted.p0 = 0.5;
        const auto side = optimal_pulse_area(shifted, defaults());
        v.require(side.area >= kPi && side.area <= 1.1 * kPi, fmt("A_opt(0.5)=%.4fpi", side.area / kPi));

        const std::vector<double> p0{0.0, 0.2};
        const std::vector<double> dp{0.005, 0.01};
        const auto s = transition_scan(base, p0, dp, defaults());
        for (double t : s.truncation_difference) track(t);
        v.require(std::abs(s.at(0, 0) - 0.5) <= 0.02, fmt("E(0,0.005)=%.4f", s.at(0, 0)));
        v.require(s.at(1, 1) >= 0.95, fmt("E(0.2,0.01)=%.4f", s.at(1, 1)));
    }

    std::vector<double> p0, dp;
    for (int i = 0; i < 32; ++i) {
        p0.push_back(i / 31.0);
        dp.push_back(0.005 + i * (0.195 / 31.0));
    }
    const auto raman = transition_scan(pulse(Mechanism::Raman, Geometry::Double, 37.5, kPi), p0, dp, defaults());
    const auto bragg = transition_scan(pulse(Mechanism::Bragg, Geometry::Double, 37.5, kPi), p0, dp, defaults());
    double diff = 0.0;
    for (std::size_t k = 0; k < raman.efficiency.size(); ++k)
        diff = std::max(diff, std::abs(raman.efficiency[k] - bragg.efficiency[k]));
    for (double t : raman.truncation_difference) track(t);
    for (double t : bragg.truncation_difference) track(t);
    const double elapsed = seconds_since(t0);
    v.require(diff <= 0.05, fmt("max Raman/Bragg difference %.4f on 32x32", diff));
    v.require(elapsed <= 600.0, fmt("%.0f s", elapsed));
    return v;
}

Verdict double_mirror_populations() {
    Verdict v;
    for (Mechanism m : {Mechanism::Raman, Mechanism::Bragg}) {
        const auto p = populations(pulse(m, Geometry::Double, 50.0, kPi), 0.1, defaults());
        track(p.truncation_difference);
        v.require(p.zero > p.other, std::string(to_string(m)) + fmt(" P(0)=%.3f P(other)=%.1e", p.zero, p.other));
        double best = 0.0;
        for (double tau = 25.0; tau <= 75.0; tau += 5.0) {
            const auto e = efficiency(pulse(m, Geometry::Double, tau, kPi), 0.01, defaults());
            track(e.truncation_difference);
            best = std::max(best, e.value);
        }
        v.require(best > 0.95, fmt("best transfer %.4f", best));
    }
    return v;
}

struct InterferometerFindings {
    Verdict sinusoidal;
    Verdict single_raman;
    Verdict double_bragg;
};

InterferometerFindings interferometer() {
    InterferometerFindings f;
    double worst_residual = 0.0;
    auto record = [&](const InterferogramResult& r) {
        worst_residual = std::max(worst_residual, r.fit_residual);
        track(r.truncation_difference);
    };

    const auto single = signal(pulse(Mechanism::Raman, Geometry::Single, 25.0, kPi), 0.01, 64, defaults());
    record(single);
    f.single_raman.require(single.contrast > 0.99, fmt("C=%.5f", single.contrast));

    double min_c = 1.0, at_tau = 0.0, at_dp = 0.0;
    for (double dp : {0.1, 0.15, 0.2})
        for (double tau = 10.0; tau <= 50.0; tau += 2.5) {
            const auto r = signal(pulse(Mechanism::Bragg, Geometry::Double, tau, kPi), dp, 64, defaults());
            record(r);
            if (r.contrast < min_c) min_c = r.contrast, at_tau = tau, at_dp = dp;
        }
    for (Mechanism m : {Mechanism::Raman, Mechanism::Bragg})
        for (Geometry g : {Geometry::Single, Geometry::Double})
            record(signal(pulse(m, g, 20.0, kPi), 0.1, 64, defaults()));

    f.sinusoidal.require(worst_residual < 1e-10, fmt("max relative residual %.2e", worst_residual));
    f.double_bragg.require(std::abs(min_c - 0.5) <= 0.1,
                           fmt("min C=%.4f", min_c) + fmt(" at tau=%.1fus dp=%.2f", at_tau, at_dp));
    return f;
}

std::string run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    if (cli::run(args, out, err) != cli::kExitOk) return "error: " + err.str();
    return out.str();
}

Verdict hygiene() {
    Verdict v;
    const double tol = SolverSettings{}.convergence_tol();
    v.require(g_worst_truncation <= tol, fmt("worst truncation difference %.2e", g_worst_truncation));

    AnalysisOptions coarse = defaults();
    AnalysisOptions fine = defaults();
    fine.samples_per_hbark = 512;
    double worst = 0.0;
    auto compare = [&](const std::function<double(const AnalysisOptions&)>& f) {
        worst = std::max(worst, std::abs(f(coarse) - f(fine)));
    };
    compare([](const AnalysisOptions& o) {
        return efficiency(pulse(Mechanism::Bragg, Geometry::Single, 25.0, kPi), 0.05, o).value;
    });
    compare([](const AnalysisOptions& o) {
        return efficiency(pulse(Mechanism::Raman, Geometry::Double, 50.0, kPi), 0.02, o).value;
    });
    compare([](const AnalysisOptions& o) {
        return losses(pulse(Mechanism::Bragg, Geometry::Double, 25.0, kPi / 2), 0.1, PulseKind::BeamSplitter, o)
            .value;
    });
    compare([](const AnalysisOptions& o) {
        return populations(pulse(Mechanism::Raman, Geometry::Double, 50.0, kPi), 0.1, o).zero;
    });
    compare([](const AnalysisOptions& o) {
        return signal(pulse(Mechanism::Bragg, Geometry::Double, 25.0, kPi), 0.1, 64, o).contrast;
    });
    v.require(worst < 1e-3, fmt("S=256 vs 512 max change %.2e", worst));

    const fs::path dir = fs::temp_directory_path() / "matterwave_acceptance_cache";
    fs::remove_all(dir);
    const std::vector<std::string> args{"efficiency", "--mechanism", "raman", "--geometry", "double",
                                        "--pulse",    "mirror",      "--delta-p",  "0.02,0.1"};
    auto cached = args;
    cached.insert(cached.end(), {"--cache-dir", dir.string()});
    const std::string plain = run_cli(args);
    const std::string cold = run_cli(cached);
    const std::string warm = run_cli(cached);
    fs::remove_all(dir);
    v.require(plain.rfind("error", 0) != 0 && cold == warm && plain == cold, "cold/warm/uncached CSV identical");
    return v;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](const char* name, const Verdict& v) {
        std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
        std::fflush(stdout);
        if (!v.pass) ++failures;
    };
    auto guarded = [&](const char* name, const std::function<Verdict()>& f) {
        try {
            report(name, f());
        } catch (const std::exception& e) {
            report(name, Verdict{false, std::string("exception: ") + e.what()});
        }
    };

    guarded("analytic-oracle", analytic_oracle);
    guarded("unitarity-suite", unitarity);
    guarded("spurious-orders", spurious_orders);
    guarded("resonance-widths", resonance_widths);
    guarded("optimal-area-and-scan", optimal_area_and_scan);
    guarded("double-mirror-populations", double_mirror_populations);
    try {
        const auto f = interferometer();
        report("interferometer-sinusoidal", f.sinusoidal);
        report("interferometer-single-raman-contrast", f.single_raman);
        report("interferometer-double-bragg-contrast-drop", f.double_bragg);
    } catch (const std::exception& e) {
        report("interferometer", Verdict{false, std::string("exception: ") + e.what()});
    }
    guarded("numerics-hygiene", hygiene);

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
