#pragma once

#include <span>

#include "matterwave/amplitude_state.hpp"
#include "matterwave/config.hpp"

namespace matterwave {

/// Relative strength of the two counterpropagating gratings. The forward
/// grating transfers +hbar K at two-photon detuning delta; the backward one is
/// resonant for the opposite direction. Single diffraction keeps only the
/// forward grating.
struct GratingWeights {
    double forward = 1.0;
    double backward = 0.0;

    static GratingWeights for_geometry(Geometry g) {
        return g == Geometry::Single ? GratingWeights{1.0, 0.0} : GratingWeights{1.0, 1.0};
    }
};

/// Right-hand side of the coupled momentum-ladder equations in the
/// interaction picture. Covers single/double Raman and Bragg diffraction for
/// arbitrary two-photon detuning. Couplings leaving [-n_max, n_max] are
/// dropped.
///
/// With theta(n, s) = omega_D + 2n + 1 - s delta, the bond between orders n and
/// n+1 carries the phase exp(-i theta(n, +1) t) on the forward grating and
/// exp(-i theta(n, -1) t) on the backward grating.
/// Raman: forward couples g_n <-> e_{n+1}, backward couples e_n <-> g_{n+1}.
/// Bragg: both gratings couple g_n <-> g_{n+1}.
class LadderSystem {
public:
    LadderSystem(const DiffractionConfig& config, double quasi_momentum, int n_max,
                 bool time_reversed = false);
    LadderSystem(const DiffractionConfig& config, double quasi_momentum, int n_max,
                 GratingWeights weights, bool time_reversed = false);

    /// Number of complex components the state vector must have.
    std::size_t dimension() const noexcept;
    int n_max() const noexcept { return n_max_; }

    /// dydt = f(t, y). Throws ConfigError on a size mismatch.
    void operator()(double t, std::span<const cplx> y, std::span<cplx> dydt) const;

    /// Convenience wrapper on a whole state.
    AmplitudeState derivative(double t, const AmplitudeState& state) const;

private:
    void evaluate(double t, std::span<const cplx> y, std::span<cplx> dydt) const;

    DiffractionConfig config_;
    Mechanism mechanism_;
    int n_max_;
    double peak_;
    double doppler_;
    double detuning_;
    GratingWeights weights_;
    bool time_reversed_;
};

}  // namespace matterwave
