#include "matterwave/pulse.hpp"

#include <cmath>

#include "matterwave/units.hpp"

namespace matterwave {

double gaussian_envelope(double t, double peak, double delta_tau) {
    const double x = t / delta_tau;
    return peak * std::exp(-0.5 * x * x);
}

double effective_rabi_factor(Geometry geometry) {
    return geometry == Geometry::Single ? 2.0 : std::sqrt(2.0);
}

// The Gaussian integrates to Omega_0 * delta_tau * sqrt(2 pi).
double peak_coupling_from_area(double area, double delta_tau, Geometry geometry) {
    return area / (effective_rabi_factor(geometry) * delta_tau * std::sqrt(2.0 * constants::pi));
}

double box_peak_coupling_from_area(double area, double duration, Geometry geometry) {
    return area / (effective_rabi_factor(geometry) * duration);
}

double resonance_detuning(Mechanism /*mechanism*/, double p0) {
    return 1.0 + doppler_frequency(p0);
}

}  // namespace matterwave
