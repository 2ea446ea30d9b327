#pragma once

#include <string>

namespace matterwave {

/// Atomic species and laser wavelength used to attach physical time units to
/// the dimensionless solver. Only conversion of times depends on it.
struct AtomPreset {
    std::string name;
    double mass_kg;
    double wavelength_m;
};

namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s (CODATA 2018, exact)
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

/// 87Rb on the D2 line.
AtomPreset rubidium87();

/// Unit conventions: momenta in units of hbar*K, frequencies in units of the
/// recoil frequency omega_K = hbar K^2 / 2M, time in units of 1/omega_K.
/// K = 2 * (2 pi / lambda) is the two-photon wave number.
class UnitSystem {
public:
    UnitSystem();
    explicit UnitSystem(AtomPreset preset);

    const AtomPreset& preset() const noexcept { return preset_; }

    /// Two-photon wave number K in 1/m.
    double two_photon_wavenumber() const noexcept;
    /// omega_K in rad/s.
    double recoil_frequency() const noexcept { return omega_k_; }

    double seconds_to_dimensionless(double seconds) const noexcept { return seconds * omega_k_; }
    double dimensionless_to_seconds(double t) const noexcept { return t / omega_k_; }
    double microseconds_to_dimensionless(double us) const noexcept {
        return seconds_to_dimensionless(us * 1e-6);
    }
    double dimensionless_to_microseconds(double t) const noexcept {
        return dimensionless_to_seconds(t) * 1e6;
    }

private:
    AtomPreset preset_;
    double omega_k_;
};

}  // namespace matterwave
