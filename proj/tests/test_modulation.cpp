// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "apqsm/modulation.hpp"
#include "apqsm/scp.hpp"

using namespace apqsm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("pam levels")
{
    CHECK(pam_levels(2) == std::vector<double>{2.0 / 3.0, 4.0 / 3.0});
    CHECK(pam_levels(4) == std::vector<double>{2.0 / 5.0, 4.0 / 5.0, 6.0 / 5.0, 8.0 / 5.0});
    CHECK(pam_levels(1) == std::vector<double>{1.0});
    CHECK_THROWS_AS(pam_levels(0), std::invalid_argument);

    SECTION("mean is exactly one for every order")
    {
        for (std::size_t m : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
            const auto levels = pam_levels(m);
            double mean = 0.0;
            for (double v : levels) mean += v;
            mean /= static_cast<double>(m);
            CHECK_THAT(mean, WithinRel(1.0, 1e-13));
        }
    }
}

TEST_CASE("power vector validation")
{
    PowerVector ok{{0.5, 0.3, 0.2}};
    CHECK_NOTHROW(ok.validate(1.0));
    CHECK_THROWS_AS((PowerVector{{0.3, 0.5, 0.2}}.validate(1.0)), std::invalid_argument);
    CHECK_THROWS_AS((PowerVector{{0.5, 0.3, 0.1}}.validate(1.0)), std::invalid_argument);
    CHECK_THROWS_AS((PowerVector{{0.9, 0.3, -0.2}}.validate(1.0)), std::invalid_argument);
    // equality between fractions is allowed
    CHECK_NOTHROW((PowerVector{{0.4, 0.4, 0.2}}.validate(1.0)));
}

TEST_CASE("apq amplitudes")
{
    SECTION("hand-evaluated mix")
    {
        const auto scheme = make_apq_scheme(4, {2, 4, 2}, PowerVector{{0.5, 0.3, 0.2}}, 1.0);
        // m = 0 selects the lowest level of each part: (2/3, 2/5, 2/3)
        CHECK_THAT(apq_amplitude(scheme, 0), WithinRel(0.58666666666666667, 1e-14));
    }

    SECTION("mean amplitude equals the optical power budget")
    {
        std::mt19937 rng(7);
        const std::array<std::array<std::size_t, 3>, 4> splits{
            {{2, 4, 2}, {4, 4, 4}, {2, 2, 2}, {1, 2, 1}}};
        for (const auto& split : splits)
            for (int rep = 0; rep < 8; ++rep) {
                std::uniform_real_distribution<double> uni(0.0, 1.0);
                std::array<double, 3> p{uni(rng), uni(rng), uni(rng)};
                std::sort(p.begin(), p.end(), std::greater<>());
                const double total = p[0] + p[1] + p[2];
                for (double& v : p) v /= total;
                p[2] = 1.0 - p[0] - p[1];
                const auto scheme = make_apq_scheme(4, split, PowerVector{p}, 1.0);
                double mean = 0.0;
                for (std::size_t m = 0; m < scheme.symbol_count(); ++m) mean += apq_amplitude(scheme, m);
                mean /= static_cast<double>(scheme.symbol_count());
                CHECK_THAT(mean, WithinRel(1.0, 1e-12));
            }
    }

    SECTION("degenerate single-symbol scheme")
    {
        const auto scheme = make_apq_scheme(2, {1, 1, 1}, PowerVector{{0.5, 0.3, 0.2}}, 1.0);
        CHECK(scheme.symbol_count() == 1);
        CHECK_THAT(apq_amplitude(scheme, 0), WithinRel(1.0, 1e-14));
    }

    SECTION("index range")
    {
        const auto scheme = make_apq_scheme(4, {2, 4, 2}, PowerVector{default_power_split(1.0)}, 1.0);
        CHECK_THROWS_AS(apq_amplitude(scheme, 16), std::out_of_range);
    }
}

TEST_CASE("bit mapping")
{
    const auto scheme = make_apq_scheme(4, {2, 4, 2}, PowerVector{default_power_split(1.0)}, 1.0);
    REQUIRE(scheme.spectral_efficiency() == 6.0);

    SECTION("all-zero input selects LED 0 and the lowest levels")
    {
        const std::vector<int> bits(6, 0);
        const TxVector tx = map_bits(scheme, bits);
        CHECK(tx.led_index == 0);
        CHECK(tx.symbol_index == 0);
        CHECK_THAT(tx.amplitude, WithinRel(apq_amplitude(scheme, 0), 1e-15));
        const auto dense = tx.dense(4);
        CHECK(dense[0] == tx.amplitude);
        CHECK(dense[1] == 0.0);
    }

    SECTION("map/demap bijection at 6 bpcu")
    {
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (std::size_t v = 0; v < 64; ++v) {
            std::vector<int> bits(6);
            for (int i = 0; i < 6; ++i) bits[i] = static_cast<int>((v >> (5 - i)) & 1u);
            const TxVector tx = map_bits(scheme, bits);
            seen.insert({tx.led_index, tx.symbol_index});
            CHECK(demap(scheme, tx.led_index, tx.symbol_index) == bits);
        }
        CHECK(seen.size() == 64);
    }

    SECTION("exhaustive bijection at 8 bpcu")
    {
        const auto s8 = make_apq_scheme(4, {4, 4, 4}, PowerVector{default_power_split(1.0)}, 1.0);
        std::set<std::vector<int>> seen;
        for (std::size_t l = 0; l < 4; ++l)
            for (std::size_t m = 0; m < 64; ++m) {
                const auto bits = demap(s8, l, m);
                REQUIRE(bits.size() == 8);
                const TxVector tx = map_bits(s8, bits);
                CHECK(tx.led_index == l);
                CHECK(tx.symbol_index == m);
                seen.insert(bits);
            }
        CHECK(seen.size() == 256);
    }

    SECTION("errors")
    {
        CHECK_THROWS_AS(map_bits(scheme, std::vector<int>(5, 0)), std::invalid_argument);
        CHECK_THROWS_AS(demap(scheme, 4, 0), std::out_of_range);
        CHECK_THROWS_AS(demap(scheme, 0, 16), std::out_of_range);
    }
}

TEST_CASE("apq codebook")
{
    const auto scheme =
        make_apq_scheme(4, {2, 4, 2}, PowerVector{{4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0}}, 1.0);
    const Codebook cb = apq_codebook(scheme);

    CHECK(cb.size() == 64);
    CHECK(cb.n_spatial == 4);
    CHECK(cb.n_symbols == 16);

    SECTION("deterministic LED-major order and positive amplitudes")
    {
        for (std::size_t l = 0; l < 4; ++l)
            for (std::size_t m = 0; m < 16; ++m) {
                const Codeword& w = cb.word(l, m);
                CHECK(w.spatial_index == l);
                CHECK(w.symbol_index == m);
                CHECK(w.tx[l] > 0.0);
                // exactly one nonzero entry
                std::size_t nonzero = 0;
                for (double v : w.tx) nonzero += v != 0.0;
                CHECK(nonzero == 1);
            }
    }

    SECTION("strictly ordered generic power gives distinct amplitudes")
    {
        std::set<double> amps;
        for (std::size_t m = 0; m < 16; ++m) amps.insert(apq_amplitude(scheme, m));
        CHECK(amps.size() == 16);
    }

    SECTION("mean codebook power equals the budget")
    {
        CHECK_THAT(cb.mean_total_power(), WithinRel(1.0, 1e-12));
    }
}

TEST_CASE("average symbol energy")
{
    SystemParams p;
    p.conv_factor_a_per_w = 1.0;
    p.p_opt_w = 1.0;
    CHECK_THAT(average_symbol_energy(p, 1.0), WithinRel(1.0, 1e-15));
    p.conv_factor_a_per_w = 2.0;
    CHECK_THAT(average_symbol_energy(p, 1.0), WithinRel(4.0, 1e-15));
    CHECK_THROWS_AS(average_symbol_energy(p, 0.0), std::invalid_argument);
}
