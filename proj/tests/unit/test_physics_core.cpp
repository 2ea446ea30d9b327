#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "matterwave/amplitude_state.hpp"
#include "matterwave/config.hpp"
#include "matterwave/error.hpp"
#include "matterwave/ladder.hpp"
#include "matterwave/pulse.hpp"
#include "matterwave/solver.hpp"
#include "matterwave/units.hpp"
#include "oracles.hpp"

using namespace matterwave;

namespace {

// Columns of the linear right-hand side at time t, built from basis vectors.
std::vector<std::vector<cplx>> jacobian(const LadderSystem& sys, double t) {
    const std::size_t d = sys.dimension();
    std::vector<std::vector<cplx>> cols(d, std::vector<cplx>(d));
    std::vector<cplx> y(d), dy(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::fill(y.begin(), y.end(), cplx{});
        y[j] = 1.0;
        sys(t, y, dy);
        cols[j] = dy;
    }
    return cols;
}

double anti_hermitian_defect(const std::vector<std::vector<cplx>>& cols) {
    double worst = 0.0;
    for (std::size_t i = 0; i < cols.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            worst = std::max(worst, std::abs(cols[j][i] + std::conj(cols[i][j])));
    return worst;
}

DiffractionConfig make(Mechanism m, Geometry g, double tau = 2.0, double area = oracle::kPi) {
    DiffractionConfig c;
    c.mechanism = m;
    c.geometry = g;
    c.delta_tau = tau;
    c.pulse_area = area;
    return c;
}

}  // namespace

TEST_CASE("gaussian envelope") {
    CHECK(gaussian_envelope(0.0, 2.5, 1.0) == doctest::Approx(2.5));
    CHECK(gaussian_envelope(1.0, 1.0, 1.0) == doctest::Approx(std::exp(-0.5)));
    CHECK(gaussian_envelope(-3.0, 1.0, 1.5) == doctest::Approx(gaussian_envelope(3.0, 1.0, 1.5)));
}

TEST_CASE("peak coupling integrates to the requested area") {
    for (Geometry g : {Geometry::Single, Geometry::Double}) {
        const double tau = 3.7;
        const double area = 0.5 * oracle::kPi;
        const double peak = peak_coupling_from_area(area, tau, g);
        const double factor = g == Geometry::Single ? 2.0 : std::sqrt(2.0);
        const double integral = oracle::simpson(
            [&](double t) { return factor * peak * std::exp(-t * t / (2 * tau * tau)); }, -12 * tau, 12 * tau);
        CHECK(integral == doctest::Approx(area).epsilon(1e-10));
        CHECK(effective_rabi_factor(g) == doctest::Approx(factor));
        CHECK(box_peak_coupling_from_area(area, tau, g) * factor * tau == doctest::Approx(area));
    }
}

TEST_CASE("recoil frequency of the rubidium preset") {
    const UnitSystem units(rubidium87());
    const AtomPreset p = units.preset();
    const double expected = oracle::recoil_frequency(p.mass_kg, p.wavelength_m);
    CHECK(units.recoil_frequency() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(units.dimensionless_to_microseconds(1.0) == doctest::Approx(10.55).epsilon(1e-3));
    for (double us : {12.5, 25.0, 37.5, 200.0}) {
        const double t = units.microseconds_to_dimensionless(us);
        CHECK(std::abs(units.dimensionless_to_microseconds(t) - us) < 1e-12 * us);
    }
}

TEST_CASE("doppler and resonance detuning") {
    CHECK(doppler_frequency(0.25) == doctest::Approx(0.5));
    CHECK(resonance_detuning(Mechanism::Raman, 0.0) == doctest::Approx(1.0));
    CHECK(resonance_detuning(Mechanism::Bragg, 0.5) == doctest::Approx(2.0));
    CHECK(resonance_detuning(Mechanism::Bragg, -0.5) == doctest::Approx(0.0));
}

TEST_CASE("pulse classification") {
    CHECK(classify_pulse_area(oracle::kPi / 2) == PulseKind::BeamSplitter);
    CHECK(classify_pulse_area(oracle::kPi) == PulseKind::Mirror);
    CHECK(classify_pulse_area(1.0) == PulseKind::Custom);
    CHECK(with_pulse(DiffractionConfig{}, PulseKind::BeamSplitter).pulse_area == doctest::Approx(oracle::kPi / 2));
}

TEST_CASE("config validation names the key") {
    DiffractionConfig c;
    c.delta_tau = -1.0;
    try {
        c.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "delta_tau");
    }
}

TEST_CASE("zero coupling gives zero derivative") {
    for (Mechanism m : {Mechanism::Raman, Mechanism::Bragg}) {
        auto c = make(m, Geometry::Double, 2.0, 0.0);
        LadderSystem sys(c, 0.13, 4);
        AmplitudeState s = AmplitudeState::eigenstate(m, 4, 0.13, InternalState::Ground, 1);
        s.g(-2) = {0.3, -0.2};
        const AmplitudeState d = sys.derivative(0.4, s);
        for (cplx v : d.data()) CHECK(std::abs(v) == 0.0);
    }
}

TEST_CASE("ladder generator is anti-Hermitian") {
    for (Mechanism m : {Mechanism::Raman, Mechanism::Bragg})
        for (Geometry g : {Geometry::Single, Geometry::Double})
            for (double t : {-1.3, 0.0, 0.7}) {
                auto c = make(m, g, 1.5, 2.0);
                c.two_photon_detuning = 1.37;
                LadderSystem sys(c, 0.21, 5);
                CHECK(anti_hermitian_defect(jacobian(sys, t)) < 1e-13);
            }
}

TEST_CASE("size mismatch is a config error") {
    LadderSystem sys(make(Mechanism::Bragg, Geometry::Single), 0.0, 3);
    std::vector<cplx> y(sys.dimension() + 1), dy(sys.dimension() + 1);
    CHECK_THROWS_AS(sys(0.0, y, dy), ConfigError);
}

TEST_CASE("raman single diffraction alternates internal state with order") {
    auto c = make(Mechanism::Raman, Geometry::Single, 1.0, oracle::kPi);
    c.n_max = 5;
    const auto out = evolve(AmplitudeState::eigenstate(Mechanism::Raman, 5, 0.0, InternalState::Ground, 0), c,
                            SolverSettings{1e-8, 1e-10});
    for (int n = -5; n <= 5; ++n) {
        if (n % 2 == 0)
            CHECK(out.population(InternalState::Excited, n) < 1e-24);
        else
            CHECK(out.population(InternalState::Ground, n) < 1e-24);
    }
    CHECK(out.population(InternalState::Excited, 1) > 1e-3);
}

TEST_CASE("double bragg without the backward grating equals single bragg") {
    auto dbl = make(Mechanism::Bragg, Geometry::Double, 1.2, 1.9);
    auto sgl = dbl;
    sgl.geometry = Geometry::Single;
    dbl.area_convention = Geometry::Single;
    LadderSystem a(dbl, 0.3, 4, GratingWeights{1.0, 0.0});
    LadderSystem b(sgl, 0.3, 4);
    for (double t : {-0.8, 0.1, 1.4}) {
        const auto ja = jacobian(a, t);
        const auto jb = jacobian(b, t);
        for (std::size_t i = 0; i < ja.size(); ++i)
            for (std::size_t j = 0; j < ja.size(); ++j) CHECK(std::abs(ja[i][j] - jb[i][j]) < 1e-15);
    }
}

TEST_CASE("amplitude state resizing keeps overlapping orders") {
    auto s = AmplitudeState::eigenstate(Mechanism::Raman, 3, 0.1, InternalState::Excited, -2);
    CHECK(s.norm() == doctest::Approx(1.0));
    const auto big = s.resized(6);
    CHECK(big.population(InternalState::Excited, -2) == doctest::Approx(1.0));
    const auto small = s.resized(1);
    CHECK(small.norm() == doctest::Approx(0.0));
    CHECK(AmplitudeState::max_difference(s, big) == doctest::Approx(0.0));
}
