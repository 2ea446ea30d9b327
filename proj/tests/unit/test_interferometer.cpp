#include <doctest.h>

#include <cmath>

#include "matterwave/error.hpp"
#include "matterwave/interferometer.hpp"
#include "matterwave/units.hpp"
#include "oracles.hpp"

using namespace matterwave;

namespace {

AnalysisOptions fast_options() {
    AnalysisOptions o;
    o.samples_per_hbark = 128;
    return o;
}

DiffractionConfig base(Mechanism m, Geometry g, double tau_us) {
    DiffractionConfig c;
    c.mechanism = m;
    c.geometry = g;
    c.delta_tau = UnitSystem().microseconds_to_dimensionless(tau_us);
    return c;
}

}  // namespace

TEST_CASE("main arms chain") {
    for (Mechanism m : {Mechanism::Raman, Mechanism::Bragg})
        for (Geometry g : {Geometry::Single, Geometry::Double}) {
            const auto arms = main_arms(m, g);
            CHECK_NOTHROW(arms.upper.validate());
            CHECK_NOTHROW(arms.lower.validate());
            CHECK(arms.upper.steps[1].pulse == PulseKind::Mirror);
        }
    auto broken = main_arms(Mechanism::Raman, Geometry::Single).upper;
    broken.steps[1].input_state = InternalState::Ground;
    CHECK_THROWS_AS(broken.validate(), ConfigError);
}

TEST_CASE("pulse sequence areas") {
    const auto seq = PulseSequence::from(base(Mechanism::Bragg, Geometry::Double, 25));
    CHECK(seq.beam_splitter.pulse_area == doctest::Approx(oracle::kPi / 2));
    CHECK(seq.for_step(1).pulse_area == doctest::Approx(oracle::kPi));
    CHECK(seq.for_step(2).pulse_area == doctest::Approx(oracle::kPi / 2));
}

TEST_CASE("identical arms give full contrast and a dark port at pi") {
    const auto psi = WavePacket::gaussian(0.0, 0.05, 64, InternalState::Ground, false);
    const auto r = interferogram(psi, psi, IntervalSet::window(0.0), 65);
    CHECK(r.contrast == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.intensities[32] < 1e-14);
    CHECK(r.intensities[0] == doctest::Approx(4.0 * psi.norm()));
    CHECK(r.fit_residual < 1e-10);
    CHECK(r.phases.size() == 65);
}

TEST_CASE("too few phase samples") {
    const auto psi = WavePacket::gaussian(0.0, 0.05, 64, InternalState::Ground, false);
    CHECK_THROWS_AS(interferogram(psi, psi, IntervalSet::window(0.0), 16), ConfigError);
}

TEST_CASE("arm order does not change amplitude or contrast") {
    const auto a = WavePacket::gaussian(0.0, 0.05, 64, InternalState::Ground, false);
    auto b = WavePacket::gaussian(0.02, 0.07, 64, InternalState::Ground, false);
    b *= cplx{0.4, 0.3};
    const auto ab = interferogram(a, b, IntervalSet::window(0.0), 64);
    const auto ba = interferogram(b, a, IntervalSet::window(0.0), 64);
    CHECK(ab.amplitude == doctest::Approx(ba.amplitude).epsilon(1e-3));
    CHECK(ab.contrast == doctest::Approx(ba.contrast).epsilon(1e-3));
    CHECK(ab.contrast < 1.0);
}

TEST_CASE("identity pulses leave no interference signal") {
    PulseSequence seq = PulseSequence::from(base(Mechanism::Raman, Geometry::Single, 25));
    seq.beam_splitter.pulse_area = 0.0;
    seq.mirror.pulse_area = 0.0;
    CHECK_THROWS_AS(signal(seq, 0.05, 64, fast_options()), AnalysisError);
}

TEST_CASE("single raman interferometer") {
    const auto r = signal(base(Mechanism::Raman, Geometry::Single, 25), 0.01, 64, fast_options());
    CHECK(r.contrast > 0.99);
    CHECK(r.fit_residual < 1e-10);
    CHECK(r.amplitude > 0.9);
    CHECK(r.truncation_difference <= 1e-3);
}

TEST_CASE("double diffraction signals are sinusoidal") {
    for (Mechanism m : {Mechanism::Raman, Mechanism::Bragg}) {
        const auto r = signal(base(m, Geometry::Double, 25), 0.1, 64, fast_options());
        CHECK(r.fit_residual < 1e-10);
        CHECK(r.contrast > 0.0);
        CHECK(r.contrast <= 1.0);
    }
}

TEST_CASE("interferometer map layout") {
    const std::vector<double> dp{0.01, 0.05};
    const UnitSystem u;
    const std::vector<double> tau{u.microseconds_to_dimensionless(25), u.microseconds_to_dimensionless(50)};
    const auto map = interferometer_map(base(Mechanism::Raman, Geometry::Single, 25), dp, tau, 64, fast_options());
    REQUIRE(map.contrast.size() == 4);
    CHECK(map.index(1, 0) == 2);
    for (double c : map.contrast) CHECK(c > 0.9);
}
