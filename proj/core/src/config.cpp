#include "matterwave/config.hpp"

#include <cmath>

#include "matterwave/error.hpp"
#include "matterwave/pulse.hpp"
#include "matterwave/units.hpp"

namespace matterwave {

std::string_view to_string(Mechanism m) { return m == Mechanism::Raman ? "raman" : "bragg"; }
std::string_view to_string(Geometry g) { return g == Geometry::Single ? "single" : "double"; }
std::string_view to_string(InternalState s) { return s == InternalState::Ground ? "g" : "e"; }
std::string_view to_string(EnvelopeShape e) { return e == EnvelopeShape::Gaussian ? "gaussian" : "box"; }

std::string_view to_string(PulseKind k) {
    switch (k) {
        case PulseKind::BeamSplitter: return "bs";
        case PulseKind::Mirror: return "m";
        case PulseKind::Custom: return "custom";
    }
    return "custom";
}

void DiffractionConfig::validate() const {
    if (!(delta_tau > 0.0) || !std::isfinite(delta_tau)) {
        throw ConfigError("delta_tau", "must be positive and finite");
    }
    if (!(pulse_area >= 0.0) || !std::isfinite(pulse_area)) {
        throw ConfigError("pulse_area", "must be non-negative and finite");
    }
    if (!std::isfinite(p0)) throw ConfigError("p0", "must be finite");
    if (!std::isfinite(two_photon_detuning)) {
        throw ConfigError("two_photon_detuning", "must be finite");
    }
    if (n_max && *n_max < 2) throw ConfigError("n_max", "must be >= 2 when explicit");
    if (!(time_window_factor > 0.0) || !std::isfinite(time_window_factor)) {
        throw ConfigError("time_window_factor", "must be positive and finite");
    }
}

double DiffractionConfig::peak_coupling() const {
    const Geometry convention = effective_area_convention();
    return envelope == EnvelopeShape::Gaussian
               ? peak_coupling_from_area(pulse_area, delta_tau, convention)
               : box_peak_coupling_from_area(pulse_area, delta_tau, convention);
}

double DiffractionConfig::t_start() const noexcept {
    return envelope == EnvelopeShape::Gaussian ? -time_window_factor * delta_tau : -0.5 * delta_tau;
}

double DiffractionConfig::t_end() const noexcept { return -t_start(); }

double DiffractionConfig::coupling(double t) const noexcept {
    const double peak = peak_coupling();
    if (envelope == EnvelopeShape::Box) return std::abs(t) <= 0.5 * delta_tau ? peak : 0.0;
    return gaussian_envelope(t, peak, delta_tau);
}

double pulse_area_of(PulseKind kind) {
    switch (kind) {
        case PulseKind::BeamSplitter: return 0.5 * constants::pi;
        case PulseKind::Mirror: return constants::pi;
        case PulseKind::Custom: break;
    }
    throw ConfigError("pulse_kind", "custom pulses carry their own area");
}

PulseKind classify_pulse_area(double area) {
    if (std::abs(area - constants::pi) < 1e-9) return PulseKind::Mirror;
    if (std::abs(area - 0.5 * constants::pi) < 1e-9) return PulseKind::BeamSplitter;
    return PulseKind::Custom;
}

DiffractionConfig with_pulse(DiffractionConfig config, PulseKind kind) {
    config.pulse_area = pulse_area_of(kind);
    return config;
}

}  // namespace matterwave
