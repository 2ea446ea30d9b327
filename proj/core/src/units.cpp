#include "matterwave/units.hpp"

#include <utility>

namespace matterwave {

AtomPreset rubidium87() { return AtomPreset{"Rb87", 1.4432e-25, 780.241e-9}; }

UnitSystem::UnitSystem() : UnitSystem(rubidium87()) {}

UnitSystem::UnitSystem(AtomPreset preset) : preset_(std::move(preset)) {
    const double k = two_photon_wavenumber();
    omega_k_ = constants::hbar * k * k / (2.0 * preset_.mass_kg);
}

double UnitSystem::two_photon_wavenumber() const noexcept {
    return 2.0 * (2.0 * constants::pi / preset_.wavelength_m);
}

}  // namespace matterwave
