#include <doctest.h>

#include <cmath>
#include <vector>

#include "matterwave/error.hpp"
#include "matterwave/pulse.hpp"
#include "matterwave/transition.hpp"
#include "matterwave/wave_packet.hpp"
#include "oracles.hpp"

using namespace matterwave;

namespace {

constexpr int kS = 64;
const SolverSettings kSettings{1e-6, 1e-9};

DiffractionConfig bragg_mirror(Geometry g, double tau) {
    DiffractionConfig c;
    c.mechanism = Mechanism::Bragg;
    c.geometry = g;
    c.delta_tau = tau;
    c.pulse_area = oracle::kPi;
    return c;
}

}  // namespace

TEST_CASE("identity transition function") {
    DiffractionConfig c;
    c.pulse_area = 0.0;
    const InputBlock in = InputBlock::covering(-0.5, 0.5, kS, InternalState::Ground);
    const auto g = TransitionFunction::identity(c, kS, std::span(&in, 1));
    for (int j = in.first; j <= in.last(); ++j) {
        CHECK(g.element(j, InternalState::Ground, InternalState::Ground, 0) == cplx(1.0, 0.0));
        CHECK(std::abs(g.element(j, InternalState::Ground, InternalState::Ground, 1)) == 0.0);
    }
    CHECK_FALSE(g.column(in.last() + 1, InternalState::Ground).has_value());
    CHECK_THROWS_AS(g.require_column(in.last() + 1, InternalState::Ground), GridError);
}

TEST_CASE("input blocks") {
    const auto b = InputBlock::order(1, 4, InternalState::Excited);
    CHECK(b.first == 2);
    CHECK(b.count == 4);
    CHECK(b.contains(5));
    CHECK_FALSE(b.contains(6));
}

TEST_CASE("columns are unitary and conserve quasi-momentum") {
    for (Mechanism m : {Mechanism::Raman, Mechanism::Bragg}) {
        DiffractionConfig c;
        c.mechanism = m;
        c.geometry = Geometry::Double;
        c.delta_tau = 1.5;
        c.pulse_area = 0.5 * oracle::kPi;
        const InputBlock in = InputBlock::covering(-0.5, 0.5, 16, InternalState::Ground);
        const auto g = build_transition(c, kSettings, 16, std::span(&in, 1));
        CHECK(g.n_max_used() >= 3);
        CHECK(g.max_truncation_difference() <= kSettings.convergence_tol());
        for (int j = in.first; j <= in.last(); ++j) {
            const auto col = g.require_column(j, InternalState::Ground);
            CHECK(col.norm() == doctest::Approx(1.0).epsilon(1e-4));
            // Off-lattice entries simply do not exist: every stored entry sits at p_i + n.
            CHECK(std::abs(col.amplitude(InternalState::Ground, g.n_store() + 1)) == 0.0);
        }
        const WavePacket psi = WavePacket::gaussian(0.0, 0.05, 16, InternalState::Ground, g.has_excited(), 3.0);
        const WavePacket out = apply(g, psi);
        CHECK(out.norm() == doctest::Approx(psi.norm()).epsilon(1e-4));
        for (int idx = out.first_index(); idx <= out.last_index(); ++idx) {
            const int shift = ((idx - psi.first_index()) % 16 + 16) % 16;
            if (shift > psi.last_index() - psi.first_index()) CHECK(std::norm(out.value(InternalState::Ground, idx)) == 0.0);
        }
    }
}

TEST_CASE("long resonant raman mirror matches an independent two-level integration") {
    for (double tau : {2.3693, 18.95}) {
        DiffractionConfig c;
        c.mechanism = Mechanism::Raman;
        c.geometry = Geometry::Single;
        c.delta_tau = tau;
        c.pulse_area = oracle::kPi;
        const InputBlock in{InternalState::Ground, 0, 1};
        const auto g = build_transition(c, SolverSettings{1e-9, 1e-11}, kS, std::span(&in, 1));
        const double peak = oracle::kPi / (2.0 * tau * std::sqrt(2.0 * oracle::kPi));
        const double expected = oracle::two_level_transfer(
            [&](double t) { return peak * std::exp(-t * t / (2 * tau * tau)); }, -5 * tau, 5 * tau, 100000);
        const double got = std::norm(g.element(0, InternalState::Ground, InternalState::Excited, 1));
        CHECK(got == doctest::Approx(expected).epsilon(1e-6));
        CHECK(got > 0.9999);
    }
}

TEST_CASE("short single bragg mirror shows a second-order quasi-resonance") {
    const auto c = bragg_mirror(Geometry::Single, 1.18465);
    const InputBlock in = InputBlock::covering(-0.75, -0.25, kS, InternalState::Ground);
    const auto g = build_transition(c, kSettings, kS, std::span(&in, 1));
    const int j = -kS / 2;
    CHECK(std::norm(g.element(j, InternalState::Ground, InternalState::Ground, 2)) > 1e-3);
}

TEST_CASE("single bragg mirror transfers the resonant class") {
    const auto c = bragg_mirror(Geometry::Single, 1.18465);
    const InputBlock in = InputBlock::covering(-0.25, 0.25, kS, InternalState::Ground);
    const auto g = build_transition(c, kSettings, kS, std::span(&in, 1));
    double best = 0.0;
    for (int j = in.first; j <= in.last(); ++j)
        best = std::max(best, std::norm(g.element(j, InternalState::Ground, InternalState::Ground, 1)));
    CHECK(best > 0.9);
}

TEST_CASE("apply is linear") {
    DiffractionConfig c;
    c.mechanism = Mechanism::Raman;
    c.delta_tau = 2.0;
    c.pulse_area = 0.5 * oracle::kPi;
    const InputBlock in = InputBlock::covering(-0.5, 0.5, 32, InternalState::Ground);
    const auto g = build_transition(c, kSettings, 32, std::span(&in, 1));
    const auto a = WavePacket::gaussian(0.0, 0.05, 32, InternalState::Ground, true, 4.0);
    auto b = WavePacket::gaussian(0.1, 0.03, 32, InternalState::Ground, true, 4.0);
    const cplx alpha{0.3, -0.7};
    const cplx beta{-1.1, 0.2};
    auto sa = a;
    sa *= alpha;
    auto sb = b;
    sb *= beta;
    const auto lhs = apply(g, sa + sb);
    auto ra = apply(g, a);
    ra *= alpha;
    auto rb = apply(g, b);
    rb *= beta;
    const auto rhs = ra + rb;
    for (InternalState s : {InternalState::Ground, InternalState::Excited})
        for (int idx = std::min(lhs.first_index(), rhs.first_index());
             idx <= std::max(lhs.last_index(), rhs.last_index()); ++idx)
            CHECK(std::abs(lhs.value(s, idx) - rhs.value(s, idx)) < 1e-12);
}

TEST_CASE("narrow packets approach the eigenstate transfer") {
    DiffractionConfig c;
    c.mechanism = Mechanism::Bragg;
    c.delta_tau = 2.3693;
    c.pulse_area = oracle::kPi;
    const InputBlock in = InputBlock::covering(-0.1, 0.1, 256, InternalState::Ground);
    const auto g = build_transition(c, kSettings, 256, std::span(&in, 1));
    const double eigen = std::norm(g.element(0, InternalState::Ground, InternalState::Ground, 1));
    const auto psi = WavePacket::gaussian(0.0, 0.005, 256, InternalState::Ground, false, 6.0);
    const auto out = apply(g, psi);
    CHECK(out.integrate(IntervalSet{{0.5, 1.5}}) == doctest::Approx(eigen).epsilon(1e-3));
}

TEST_CASE("double bragg is reflection symmetric at the central resonance") {
    const auto c = bragg_mirror(Geometry::Double, 2.3693);
    const InputBlock in = InputBlock::covering(-0.5, 0.5 + 1.0 / 32, 32, InternalState::Ground);
    const auto g = build_transition(c, kSettings, 32, std::span(&in, 1));
    for (int j = 1; j < 16; ++j)
        for (int n = -3; n <= 3; ++n) {
            const double a = std::norm(g.element(j, InternalState::Ground, InternalState::Ground, n));
            const double b = std::norm(g.element(-j, InternalState::Ground, InternalState::Ground, -n));
            CHECK(std::abs(a - b) < 1e-4);
        }
}

TEST_CASE("apply rejects packets outside the domain") {
    DiffractionConfig c;
    c.pulse_area = 0.0;
    const InputBlock in = InputBlock::covering(-0.1, 0.1, 32, InternalState::Ground);
    const auto g = TransitionFunction::identity(c, 32, std::span(&in, 1));
    const auto wide = WavePacket::gaussian(0.0, 0.1, 32, InternalState::Ground, false, 6.0);
    CHECK_THROWS_AS(apply(g, wide), GridError);
    const auto other_grid = WavePacket::gaussian(0.0, 0.01, 64, InternalState::Ground, false, 2.0);
    CHECK_THROWS_AS(apply(g, other_grid), GridError);
}
