#pragma once

#include <optional>
#include <string_view>

namespace matterwave {

enum class Mechanism { Raman, Bragg };
enum class Geometry { Single, Double };
enum class InternalState { Ground, Excited };

/// Temporal shape of the coupling. Box is a test hook: the analytic two-level
/// statements only hold for rectangular pulses.
enum class EnvelopeShape { Gaussian, Box };

enum class PulseKind { BeamSplitter, Mirror, Custom };

std::string_view to_string(Mechanism m);
std::string_view to_string(Geometry g);
std::string_view to_string(InternalState s);
std::string_view to_string(EnvelopeShape e);
std::string_view to_string(PulseKind k);

/// Parameters of one diffraction pulse. All quantities dimensionless
/// (momenta in hbar K, frequencies in omega_K, times in 1/omega_K).
struct DiffractionConfig {
    Mechanism mechanism = Mechanism::Bragg;
    Geometry geometry = Geometry::Single;
    /// Gaussian width of Omega(t); full duration for a box pulse.
    double delta_tau = 1.0;
    /// Time integral of the effective Rabi frequency, radians.
    double pulse_area = 3.14159265358979323846;
    /// Mean momentum of the prepared wave packet.
    double p0 = 0.0;
    /// Raman: Delta_omega - omega_eg - omega_AC. Bragg: Delta_omega.
    double two_photon_detuning = 1.0;
    /// Largest retained diffraction order; nullopt selects it automatically.
    std::optional<int> n_max;
    /// Integration window is [-f delta_tau, f delta_tau] for Gaussian pulses.
    double time_window_factor = 5.0;
    EnvelopeShape envelope = EnvelopeShape::Gaussian;
    /// Geometry whose effective Rabi frequency defines `pulse_area`. Unset
    /// means `geometry`. Double-diffraction runs quoting single-diffraction
    /// areas set this to Single.
    std::optional<Geometry> area_convention;

    /// Throws ConfigError on violated invariants.
    void validate() const;

    Geometry effective_area_convention() const noexcept {
        return area_convention.value_or(geometry);
    }
    /// Peak coupling Omega_0 implied by (pulse_area, delta_tau, convention).
    double peak_coupling() const;
    /// Regime parameter epsilon = Omega_0 / omega_K.
    double regime_parameter() const { return peak_coupling(); }
    /// Integration interval.
    double t_start() const noexcept;
    double t_end() const noexcept;
    /// Coupling Omega(t) for this configuration.
    double coupling(double t) const noexcept;

    bool has_excited_state() const noexcept { return mechanism == Mechanism::Raman; }
};

/// Area of a pulse kind: pi/2 for a beam splitter, pi for a mirror.
double pulse_area_of(PulseKind kind);
/// Classifies an area as beam splitter (pi/2), mirror (pi) or custom.
PulseKind classify_pulse_area(double area);

/// Returns `config` with the pulse area set to the kind's nominal area.
DiffractionConfig with_pulse(DiffractionConfig config, PulseKind kind);

}  // namespace matterwave
