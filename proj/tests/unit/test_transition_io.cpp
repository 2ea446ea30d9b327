#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "matterwave/error.hpp"
#include "matterwave/transition.hpp"
#include "matterwave/transition_io.hpp"
#include "oracles.hpp"

using namespace matterwave;
namespace fs = std::filesystem;

namespace {

DiffractionConfig sample_config() {
    DiffractionConfig c;
    c.mechanism = Mechanism::Raman;
    c.geometry = Geometry::Double;
    c.delta_tau = 1.3;
    c.pulse_area = 0.5 * oracle::kPi;
    c.area_convention = Geometry::Single;
    return c;
}

const SolverSettings kSettings{1e-6, 1e-9};

std::vector<InputBlock> sample_inputs() {
    return {InputBlock::covering(-0.25, 0.25, 16, InternalState::Ground),
            InputBlock::covering(0.75, 1.0, 16, InternalState::Excited)};
}

TransitionFunction sample() {
    const auto in = sample_inputs();
    return build_transition(sample_config(), kSettings, 16, in);
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("matterwave_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("fnv1a reference values") {
    CHECK(fnv1a64({}) == 0xcbf29ce484222325ULL);
    const std::string a = "a";
    CHECK(fnv1a64(std::as_bytes(std::span(a.data(), a.size()))) == 0xaf63dc4c8601ec8cULL);
    const std::string foobar = "foobar";
    CHECK(fnv1a64(std::as_bytes(std::span(foobar.data(), foobar.size()))) == 0x85944171f73967e8ULL);
}

TEST_CASE("cache key depends on every input") {
    const auto in = sample_inputs();
    const auto base = transition_cache_key(sample_config(), kSettings, 16, in);
    CHECK(base == transition_cache_key(sample_config(), kSettings, 16, in));
    auto c = sample_config();
    c.pulse_area += 1e-12;
    CHECK(base != transition_cache_key(c, kSettings, 16, in));
    CHECK(base != transition_cache_key(sample_config(), SolverSettings{1e-7, 1e-9}, 16, in));
    CHECK(base != transition_cache_key(sample_config(), kSettings, 32, in));
    auto in2 = in;
    in2[1].count += 1;
    CHECK(base != transition_cache_key(sample_config(), kSettings, 16, in2));
}

TEST_CASE("binary round trip is exact") {
    const auto g = sample();
    std::stringstream buf;
    write_transition(buf, g);
    const std::string bytes = buf.str();
    CHECK(bytes.substr(0, 5) == "MWTF1");
    std::istringstream in(bytes);
    const auto r = read_transition(in);
    CHECK(r.samples_per_hbark() == g.samples_per_hbark());
    CHECK(r.n_store() == g.n_store());
    CHECK(r.config().area_convention == Geometry::Single);
    CHECK(r.config().delta_tau == g.config().delta_tau);
    REQUIRE(r.blocks().size() == g.blocks().size());
    for (std::size_t b = 0; b < g.blocks().size(); ++b) {
        CHECK(r.blocks()[b].input.state == g.blocks()[b].input.state);
        CHECK(r.blocks()[b].amplitudes == g.blocks()[b].amplitudes);
        CHECK(r.blocks()[b].n_max_used == g.blocks()[b].n_max_used);
    }
    std::stringstream again;
    write_transition(again, r);
    CHECK(again.str() == bytes);
}

TEST_CASE("corruption is detected") {
    std::stringstream buf;
    write_transition(buf, sample());
    const std::string bytes = buf.str();

    SUBCASE("flipped payload byte") {
        std::string bad = bytes;
        bad[bad.size() / 2] ^= 0x5a;
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_transition(in), FormatError);
    }
    SUBCASE("bad magic") {
        std::string bad = bytes;
        bad[0] = 'X';
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_transition(in), FormatError);
    }
    SUBCASE("truncated") {
        std::istringstream in(bytes.substr(0, bytes.size() - 9));
        CHECK_THROWS_AS(read_transition(in), FormatError);
    }
    SUBCASE("trailing bytes") {
        std::istringstream in(bytes + "x");
        CHECK_THROWS_AS(read_transition(in), FormatError);
    }
}

TEST_CASE("file save and load") {
    const fs::path dir = scratch_dir("io");
    fs::create_directories(dir);
    const auto g = sample();
    save_transition(dir / "g.mwtf", g);
    CHECK_FALSE(fs::exists(dir / "g.mwtf.tmp"));
    const auto r = load_transition(dir / "g.mwtf");
    CHECK(r.blocks()[0].amplitudes == g.blocks()[0].amplitudes);
    CHECK_THROWS_AS(load_transition(dir / "missing.mwtf"), Error);
    fs::remove_all(dir);
}

TEST_CASE("cache hits, misses and rebuilds") {
    const fs::path dir = scratch_dir("cache");
    TransitionCache cache(dir);
    CHECK(fs::is_directory(dir));
    const auto in = sample_inputs();
    const auto first = cache.get_or_build(sample_config(), kSettings, 16, in);
    CHECK(cache.misses() == 1);
    const auto second = cache.get_or_build(sample_config(), kSettings, 16, in);
    CHECK(cache.hits() == 1);
    CHECK(second.blocks()[1].amplitudes == first.blocks()[1].amplitudes);

    const fs::path file = cache.path_for(transition_cache_key(sample_config(), kSettings, 16, in));
    CHECK(file.extension() == ".mwtf");
    CHECK(file.stem().string().size() == 16);
    std::ofstream(file, std::ios::binary | std::ios::trunc) << "garbage";
    const auto third = cache.get_or_build(sample_config(), kSettings, 16, in);
    CHECK(cache.misses() == 2);
    CHECK(third.blocks()[0].amplitudes == first.blocks()[0].amplitudes);
    fs::remove_all(dir);
}
