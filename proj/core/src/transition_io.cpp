#include "matterwave/transition_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "matterwave/error.hpp"

namespace matterwave {

namespace {

class ByteWriter {
public:
    template <class T>
    void put(T value) {
        static_assert(std::is_trivially_copyable_v<T>);
        auto raw = std::bit_cast<std::array<std::byte, sizeof(T)>>(value);
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
        bytes_.insert(bytes_.end(), raw.begin(), raw.end());
    }
    void put_raw(const char* data, std::size_t n) {
        const auto* p = reinterpret_cast<const std::byte*>(data);
        bytes_.insert(bytes_.end(), p, p + n);
    }
    const std::vector<std::byte>& bytes() const noexcept { return bytes_; }

private:
    std::vector<std::byte> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

    template <class T>
    T get() {
        if (pos_ + sizeof(T) > bytes_.size()) throw FormatError("MWTF1: truncated file");
        std::array<std::byte, sizeof(T)> raw;
        std::memcpy(raw.data(), bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
        pos_ += sizeof(T);
        return std::bit_cast<T>(raw);
    }
    std::span<const std::byte> raw(std::size_t n) {
        if (pos_ + n > bytes_.size()) throw FormatError("MWTF1: truncated file");
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }
    std::size_t position() const noexcept { return pos_; }

private:
    std::span<const std::byte> bytes_;
    std::size_t pos_ = 0;
};

std::uint8_t encode(Mechanism m) { return m == Mechanism::Raman ? 0 : 1; }
std::uint8_t encode(Geometry g) { return g == Geometry::Single ? 0 : 1; }
std::uint8_t encode(EnvelopeShape e) { return e == EnvelopeShape::Gaussian ? 0 : 1; }
std::uint8_t encode(InternalState s) { return s == InternalState::Ground ? 0 : 1; }
std::uint8_t encode(const std::optional<Geometry>& g) { return !g ? 0 : (*g == Geometry::Single ? 1 : 2); }

void put_header(ByteWriter& w, const DiffractionConfig& c, const SolverSettings& s, int samples) {
    w.put(encode(c.mechanism));
    w.put(encode(c.geometry));
    w.put(encode(c.envelope));
    w.put(encode(c.area_convention));
    w.put(c.delta_tau);
    w.put(c.pulse_area);
    w.put(c.p0);
    w.put(c.two_photon_detuning);
    w.put(c.time_window_factor);
    w.put(static_cast<std::int32_t>(c.n_max.value_or(-1)));
    w.put(s.rel_tol);
    w.put(s.abs_tol);
    w.put(s.max_step.value_or(0.0));
    w.put(s.convergence_norm_tol.value_or(0.0));
    w.put(static_cast<std::int32_t>(samples));
}

template <class T>
T decode_enum(std::uint8_t v, T zero, T one, const char* what) {
    if (v == 0) return zero;
    if (v == 1) return one;
    throw FormatError(std::string("MWTF1: bad ") + what);
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::byte> bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (std::byte b : bytes) {
        h ^= static_cast<std::uint64_t>(b);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t transition_cache_key(const DiffractionConfig& config, const SolverSettings& settings,
                                   int samples_per_hbark, std::span<const InputBlock> inputs) {
    ByteWriter w;
    w.put_raw(kTransitionMagic, sizeof kTransitionMagic);
    put_header(w, config, settings, samples_per_hbark);
    w.put(static_cast<std::uint32_t>(inputs.size()));
    for (const InputBlock& in : inputs) {
        w.put(encode(in.state));
        w.put(static_cast<std::int32_t>(in.first));
        w.put(static_cast<std::int32_t>(in.count));
    }
    return fnv1a64(w.bytes());
}

void write_transition(std::ostream& out, const TransitionFunction& g) {
    std::vector<InputBlock> inputs;
    for (const auto& b : g.blocks()) inputs.push_back(b.input);
    ByteWriter w;
    w.put_raw(kTransitionMagic, sizeof kTransitionMagic);
    w.put(transition_cache_key(g.config(), g.settings(), g.samples_per_hbark(), inputs));
    put_header(w, g.config(), g.settings(), g.samples_per_hbark());
    w.put(static_cast<std::int32_t>(g.n_store()));
    w.put(static_cast<std::uint32_t>(g.blocks().size()));
    for (const auto& b : g.blocks()) {
        w.put(encode(b.input.state));
        w.put(static_cast<std::int32_t>(b.input.first));
        w.put(static_cast<std::int32_t>(b.input.count));
        for (int n : b.n_max_used) w.put(static_cast<std::int32_t>(n));
        for (double d : b.truncation_difference) w.put(d);
        for (const cplx& a : b.amplitudes) {
            w.put(a.real());
            w.put(a.imag());
        }
    }
    w.put(fnv1a64(w.bytes()));
    const auto& bytes = w.bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("MWTF1: write failed");
}

TransitionFunction read_transition(std::istream& in) {
    std::vector<char> buffer((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto bytes = std::as_bytes(std::span<const char>(buffer));
    if (bytes.size() < sizeof kTransitionMagic + 8 ||
        std::memcmp(buffer.data(), kTransitionMagic, sizeof kTransitionMagic) != 0) {
        throw FormatError("MWTF1: bad magic");
    }
    const auto body = bytes.first(bytes.size() - 8);
    ByteReader tail(bytes.last(8));
    if (tail.get<std::uint64_t>() != fnv1a64(body)) throw FormatError("MWTF1: checksum mismatch");

    ByteReader r(body);
    r.raw(sizeof kTransitionMagic);
    const auto key = r.get<std::uint64_t>();

    DiffractionConfig c;
    c.mechanism = decode_enum(r.get<std::uint8_t>(), Mechanism::Raman, Mechanism::Bragg, "mechanism");
    c.geometry = decode_enum(r.get<std::uint8_t>(), Geometry::Single, Geometry::Double, "geometry");
    c.envelope = decode_enum(r.get<std::uint8_t>(), EnvelopeShape::Gaussian, EnvelopeShape::Box, "envelope");
    switch (r.get<std::uint8_t>()) {
        case 0: c.area_convention.reset(); break;
        case 1: c.area_convention = Geometry::Single; break;
        case 2: c.area_convention = Geometry::Double; break;
        default: throw FormatError("MWTF1: bad area convention");
    }
    c.delta_tau = r.get<double>();
    c.pulse_area = r.get<double>();
    c.p0 = r.get<double>();
    c.two_photon_detuning = r.get<double>();
    c.time_window_factor = r.get<double>();
    if (const auto n = r.get<std::int32_t>(); n >= 0) c.n_max = n;

    SolverSettings s;
    s.rel_tol = r.get<double>();
    s.abs_tol = r.get<double>();
    if (const double v = r.get<double>(); v > 0.0) s.max_step = v;
    if (const double v = r.get<double>(); v > 0.0) s.convergence_norm_tol = v;
    const int samples = r.get<std::int32_t>();
    const int n_store = r.get<std::int32_t>();
    const auto block_count = r.get<std::uint32_t>();
    if (n_store < 0 || samples < 2) throw FormatError("MWTF1: bad grid header");

    const int states = c.has_excited_state() ? 2 : 1;
    const std::size_t stride = static_cast<std::size_t>(states * (2 * n_store + 1));
    std::vector<TransitionFunction::Block> blocks;
    std::vector<InputBlock> inputs;
    for (std::uint32_t b = 0; b < block_count; ++b) {
        TransitionFunction::Block block;
        block.input.state = decode_enum(r.get<std::uint8_t>(), InternalState::Ground, InternalState::Excited, "state");
        block.input.first = r.get<std::int32_t>();
        block.input.count = r.get<std::int32_t>();
        if (block.input.count < 0) throw FormatError("MWTF1: negative block size");
        const auto count = static_cast<std::size_t>(block.input.count);
        for (std::size_t k = 0; k < count; ++k) block.n_max_used.push_back(r.get<std::int32_t>());
        for (std::size_t k = 0; k < count; ++k) block.truncation_difference.push_back(r.get<double>());
        block.amplitudes.resize(count * stride);
        for (cplx& a : block.amplitudes) {
            const double re = r.get<double>();
            const double im = r.get<double>();
            a = {re, im};
        }
        inputs.push_back(block.input);
        blocks.push_back(std::move(block));
    }
    if (r.position() != body.size()) throw FormatError("MWTF1: trailing bytes");
    if (key != transition_cache_key(c, s, samples, inputs)) throw FormatError("MWTF1: content key mismatch");
    return TransitionFunction(c, s, samples, n_store, std::move(blocks));
}

void save_transition(const std::filesystem::path& path, const TransitionFunction& g) {
    // Write-then-rename so concurrent readers never see a partial file.
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot open " + tmp + " for writing");
        write_transition(out, g);
    }
    std::filesystem::rename(tmp, path);
}

TransitionFunction load_transition(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return read_transition(in);
}

TransitionCache::TransitionCache(std::filesystem::path directory) : directory_(std::move(directory)) {
    std::filesystem::create_directories(directory_);
}

std::optional<TransitionCache> TransitionCache::from_environment() {
    const char* dir = std::getenv("MATTERWAVE_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    return TransitionCache(dir);
}

std::filesystem::path TransitionCache::path_for(std::uint64_t key) const {
    std::ostringstream name;
    name << std::hex;
    name.width(16);
    name.fill('0');
    name << key << ".mwtf";
    return directory_ / name.str();
}

TransitionFunction TransitionCache::get_or_build(const DiffractionConfig& config,
                                                 const SolverSettings& settings, int samples_per_hbark,
                                                 std::span<const InputBlock> inputs,
                                                 const BuildOptions& options) {
    const auto path = path_for(transition_cache_key(config, settings, samples_per_hbark, inputs));
    if (std::filesystem::exists(path)) {
        try {
            TransitionFunction g = load_transition(path);
            ++hits_;
            return g;
        } catch (const FormatError&) {
            // fall through and rebuild
        }
    }
    ++misses_;
    TransitionFunction g = build_transition(config, settings, samples_per_hbark, inputs, options);
    save_transition(path, g);
    return g;
}

}  // namespace matterwave
