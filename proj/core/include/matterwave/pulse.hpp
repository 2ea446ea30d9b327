#pragma once

#include "matterwave/config.hpp"

namespace matterwave {

/// peak * exp(-t^2 / (2 delta_tau^2)).
double gaussian_envelope(double t, double peak, double delta_tau);

/// Peak coupling Omega_0 such that the effective Rabi frequency
/// (2 Omega for single, sqrt(2) Omega for double diffraction) of a Gaussian
/// envelope integrates to `area`.
double peak_coupling_from_area(double area, double delta_tau, Geometry geometry);

/// Same for a rectangular pulse of total duration `duration`.
double box_peak_coupling_from_area(double area, double duration, Geometry geometry);

/// Ratio Omega_R / Omega for the geometry.
double effective_rabi_factor(Geometry geometry);

/// Doppler frequency pK/M in units of omega_K, i.e. 2p for p in hbar K.
constexpr double doppler_frequency(double p) noexcept { return 2.0 * p; }

/// Two-photon detuning that makes |p0> -> |p0 + hbar K> resonant.
/// Identical for both mechanisms in the combined-detuning convention.
double resonance_detuning(Mechanism mechanism, double p0);

}  // namespace matterwave
