// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <numbers>

#include "apqsm/geometry.hpp"

using namespace apqsm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

TEST_CASE("lambertian order")
{
    CHECK_THAT(lambertian_order(60.0 * kDeg), WithinRel(1.0, 1e-14));
    CHECK_THAT(lambertian_order(15.0 * kDeg), WithinRel(19.993727358517101, 1e-12));
    CHECK_THAT(lambertian_order(45.0 * kDeg), WithinRel(2.0, 1e-12));
    CHECK_THROWS_AS(lambertian_order(0.0), std::domain_error);
    CHECK_THROWS_AS(lambertian_order(std::numbers::pi / 2.0), std::domain_error);
    CHECK_THROWS_AS(lambertian_order(-0.1), std::domain_error);
}

TEST_CASE("radiant intensity")
{
    CHECK_THAT(radiant_intensity(0.0, 1.0), WithinRel(1.0 / std::numbers::pi, 1e-14));
    CHECK_THAT(radiant_intensity(std::numbers::pi / 2.0, 20.0), WithinAbs(0.0, 1e-300));
    // frozen extended-precision evaluation at 2.32 degrees, order 20
    CHECK_THAT(radiant_intensity(2.32 * kDeg, 20.0), WithinRel(3.2878871703560652, 1e-12));
    CHECK_THROWS_AS(radiant_intensity(-0.01, 1.0), std::domain_error);
    CHECK_THROWS_AS(radiant_intensity(1.6, 1.0), std::domain_error);
}

TEST_CASE("concentrator gain")
{
    SystemParams p;
    p.refractive_index = 1.5;
    p.fov_rad = 15.0 * kDeg;
    CHECK(concentrator_gain(p.fov_rad + 0.01, p) == 0.0);
    CHECK_THAT(concentrator_gain(0.02, p), WithinRel(33.588457268119896, 1e-12));
    SystemParams unit;
    unit.refractive_index = 1.0;
    unit.fov_rad = std::numbers::pi / 2.0;
    CHECK_THAT(concentrator_gain(0.0, unit), WithinRel(1.0, 1e-14));
    CHECK_THROWS_AS(concentrator_gain(-0.1, p), std::domain_error);
}

TEST_CASE("channel gain composition and golden value")
{
    SystemParams params; // Table-I defaults with n = 1.5

    SECTION("vertical link collapses to the radiant intensity times the fixed gains")
    {
        SystemParams p;
        p.pd_area_m2 = 1.0;
        const Vec3 led{0.0, 0.0, 1.0}, pd{0.0, 0.0, 0.0};
        const double nu = lambertian_order(p.semi_angle_rad);
        const double expected = radiant_intensity(0.0, nu) * p.filter_gain * concentrator_gain(0.0, p);
        CHECK_THAT(channel_gain(led, pd, p), WithinRel(expected, 1e-14));
    }

    SECTION("inverse square law at fixed angles")
    {
        const double h1 = channel_gain({0, 0, 1}, {0, 0, 0}, params);
        const double h2 = channel_gain({0, 0, 2}, {0, 0, 0}, params);
        CHECK_THAT(h2, WithinRel(h1 / 4.0, 1e-13));
    }

    SECTION("reference pair golden value")
    {
        const double h = channel_gain({1.6, 1.6, 2.5}, {1.55, 1.55, 0.75}, params);
        CHECK_THAT(h, WithinRel(3.5964863368569855e-3, 1e-13));
    }

    SECTION("FoV cutoff")
    {
        CHECK(channel_gain({1.6, 1.6, 2.5}, {1.0, 1.0, 0.75}, params) == 0.0);
    }

    SECTION("degenerate geometry")
    {
        CHECK_THROWS_AS(channel_gain({1, 1, 1}, {1, 1, 1}, params), std::invalid_argument);
    }
}

TEST_CASE("reference channel matrix")
{
    const Geometry geom = reference_geometry();
    const SystemParams params;
    const ChannelMatrix h = build_channel_matrix(geom, params);

    REQUIRE(h.n_rx() == 4);
    REQUIRE(h.n_tx() == 4);

    SECTION("golden entries")
    {
        // frozen extended-precision values; the matrix has three distinct gains
        const double a = 3.5964863368569855e-3;
        const double b = 3.3375649479720039e-3;
        const double c = 3.0987786381783304e-3;
        const double expected[4][4] = {{a, b, b, c}, {b, a, c, b}, {b, c, a, b}, {c, b, b, a}};
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t l = 0; l < 4; ++l) {
                CHECK(h(r, l) > 0.0);
                CHECK_THAT(h(r, l), WithinRel(expected[r][l], 1e-13));
            }
    }

    SECTION("column correlation exceeds 0.9 on the reference layout")
    {
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) {
                double dot = 0, ni = 0, nj = 0;
                for (std::size_t r = 0; r < 4; ++r) {
                    dot += h(r, i) * h(r, j);
                    ni += h(r, i) * h(r, i);
                    nj += h(r, j) * h(r, j);
                }
                CHECK(dot / std::sqrt(ni * nj) > 0.9);
            }
    }

    SECTION("bit-exact reproducibility")
    {
        const ChannelMatrix h2 = build_channel_matrix(geom, params);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t l = 0; l < 4; ++l) {
                const double a = h(r, l), b = h2(r, l);
                CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
            }
    }

    SECTION("permuting LEDs permutes columns identically")
    {
        Geometry perm = geom;
        std::swap(perm.led_positions[0], perm.led_positions[3]);
        const ChannelMatrix hp = build_channel_matrix(perm, params);
        for (std::size_t r = 0; r < 4; ++r) {
            CHECK(hp(r, 0) == h(r, 3));
            CHECK(hp(r, 3) == h(r, 0));
            CHECK(hp(r, 1) == h(r, 1));
        }
    }

    SECTION("PD outside every FoV yields a zero row")
    {
        Geometry far = geom;
        far.pd_positions[2] = {0.2, 0.2, 0.75};
        const ChannelMatrix hf = build_channel_matrix(far, params);
        for (std::size_t l = 0; l < 4; ++l) CHECK(hf(2, l) == 0.0);
    }
}

TEST_CASE("gain decreases with distance at fixed angles")
{
    const SystemParams params;
    double prev = std::numeric_limits<double>::infinity();
    for (double z = 1.0; z < 2.6; z += 0.25) {
        // keep the incidence angle constant by scaling the whole offset
        const double scale = z / 1.0;
        const double h = channel_gain({0.02 * scale, 0.03 * scale, z}, {0, 0, 0}, params);
        CHECK(h < prev);
        prev = h;
    }
}

TEST_CASE("geometry validation")
{
    const SystemParams params;
    Geometry g = reference_geometry();

    SECTION("LED count must be a power of two")
    {
        g.led_positions.resize(3);
        CHECK_THROWS_AS(build_channel_matrix(g, params), std::invalid_argument);
    }
    SECTION("positions must sit inside the room")
    {
        g.pd_positions[0].x = 10.0;
        CHECK_THROWS_AS(build_channel_matrix(g, params), std::invalid_argument);
    }
    SECTION("LEDs must sit above the PDs")
    {
        g.led_positions[0].z = 0.5;
        CHECK_THROWS_AS(build_channel_matrix(g, params), std::invalid_argument);
    }
    SECTION("parameter sanity")
    {
        SystemParams bad;
        bad.fov_rad = 2.0;
        CHECK_THROWS_AS(build_channel_matrix(g, bad), std::invalid_argument);
    }
}
