#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "matterwave/transition.hpp"

namespace matterwave {

/// Binary cache format "MWTF1". All integers and doubles little-endian.
///
///   offset  size  field
///   0       8     magic "MWTF1\0\0\0"
///   8       8     u64 content key (see transition_cache_key)
///   16      4     u8 mechanism (0 Raman, 1 Bragg), u8 geometry (0 single,
///                 1 double), u8 envelope (0 Gaussian, 1 box), u8 area
///                 convention (0 same as geometry, 1 single, 2 double)
///   20      40    f64 delta_tau, pulse_area, p0, two_photon_detuning,
///                 time_window_factor
///   60      4     i32 n_max (-1 = automatic)
///   64      32    f64 rel_tol, abs_tol, max_step (0 = default),
///                 convergence_norm_tol (0 = default)
///   96      12    i32 samples_per_hbark, i32 n_store, u32 block_count
///   then per block:
///           1+4+4 u8 input state (0 g, 1 e), i32 first index, i32 count
///           count x i32 n_max_used, count x f64 truncation difference
///           count x states x (2 n_store + 1) x (f64 re, f64 im)
///   end     8     u64 FNV-1a 64 checksum of all preceding bytes
inline constexpr char kTransitionMagic[8] = {'M', 'W', 'T', 'F', '1', '\0', '\0', '\0'};

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(std::span<const std::byte> bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Content hash of everything that determines a transition function:
/// configuration, solver settings, grid and input domain.
std::uint64_t transition_cache_key(const DiffractionConfig& config, const SolverSettings& settings,
                                   int samples_per_hbark, std::span<const InputBlock> inputs);

void write_transition(std::ostream& out, const TransitionFunction& g);
/// Throws FormatError on a bad magic, truncated data or checksum mismatch.
TransitionFunction read_transition(std::istream& in);

void save_transition(const std::filesystem::path& path, const TransitionFunction& g);
TransitionFunction load_transition(const std::filesystem::path& path);

/// Directory of MWTF1 files named <key>.mwtf.
class TransitionCache {
public:
    explicit TransitionCache(std::filesystem::path directory);

    /// From $MATTERWAVE_CACHE_DIR, if set.
    static std::optional<TransitionCache> from_environment();

    const std::filesystem::path& directory() const noexcept { return directory_; }
    std::filesystem::path path_for(std::uint64_t key) const;

    /// Loads a cached function or builds and stores it. Unreadable cache
    /// entries are rebuilt.
    TransitionFunction get_or_build(const DiffractionConfig& config, const SolverSettings& settings,
                                    int samples_per_hbark, std::span<const InputBlock> inputs,
                                    const BuildOptions& options = {});

    long hits() const noexcept { return hits_; }
    long misses() const noexcept { return misses_; }

private:
    std::filesystem::path directory_;
    long hits_ = 0;
    long misses_ = 0;
};

}  // namespace matterwave
