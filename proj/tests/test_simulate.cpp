// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "apqsm/simulate.hpp"
#include "oracles.hpp"

using namespace apqsm;
using Catch::Matchers::WithinRel;

TEST_CASE("sigma from transmit SNR")
{
    CHECK_THAT(sigma_from_snr_db(0.0, 1.0, 1.0), WithinRel(1.0, 1e-14));
    CHECK_THAT(sigma_from_snr_db(40.0, 1.0, 1.0), WithinRel(sigma_from_snr_db(20.0, 1.0, 1.0) / 10.0, 1e-12));
    CHECK_THAT(sigma_from_snr_db(120.0, 1.0, 1.0), WithinRel(1e-6, 1e-12));
    CHECK_THAT(sigma_from_snr_db(10.0, 2.0, 3.0), WithinRel(6.0 / std::sqrt(10.0), 1e-12));
}

TEST_CASE("wilson interval")
{
    const WilsonInterval none = wilson_interval(0, 1000);
    CHECK(none.lo == 0.0);
    CHECK(none.hi > 0.0);
    CHECK(none.hi < 0.01);
    const WilsonInterval some = wilson_interval(50, 1000);
    CHECK(some.lo < 0.05);
    CHECK(some.hi > 0.05);
    CHECK(some.hi - some.lo < 0.03);
    const WilsonInterval empty = wilson_interval(0, 0);
    CHECK(empty.lo == 0.0);
    CHECK(empty.hi == 1.0);
}

TEST_CASE("run_point")
{
    oracles::SmallInstance inst;
    const ReceivedCodebook rc(inst.h, inst.cb, 1.0);
    MonteCarloOptions opt;
    opt.min_errors = 50;
    opt.max_trials = 100'000;
    opt.master_seed = 12345;

    SECTION("noiseless run sees zero errors and an unreliable flag")
    {
        const SerPoint pt = run_point(rc, 0.0, opt, 0, DetectorKind::joint, 1e9);
        CHECK(pt.errors == 0);
        CHECK(pt.trials == opt.max_trials);
        CHECK_FALSE(pt.reliable);
    }

    SECTION("same seed twice gives identical counts")
    {
        const double sigma = sigma_from_snr_db(85.0, 1.0, 1.0);
        const SerPoint a = run_point(rc, sigma, opt, 3, DetectorKind::joint, 85.0);
        const SerPoint b = run_point(rc, sigma, opt, 3, DetectorKind::joint, 85.0);
        CHECK(a.trials == b.trials);
        CHECK(a.errors == b.errors);
        CHECK(a.errors >= opt.min_errors);
        CHECK(a.reliable);
    }

    SECTION("two workers are deterministic for the fixed worker count")
    {
        const double sigma = sigma_from_snr_db(85.0, 1.0, 1.0);
        MonteCarloOptions two = opt;
        two.workers = 2;
        const SerPoint a = run_point(rc, sigma, two, 3, DetectorKind::joint, 85.0);
        const SerPoint b = run_point(rc, sigma, two, 3, DetectorKind::joint, 85.0);
        CHECK(a.trials == b.trials);
        CHECK(a.errors == b.errors);
    }

    SECTION("agrees with an independent naive simulator within overlapping CIs")
    {
        const double sigma = sigma_from_snr_db(84.0, 1.0, 1.0);
        MonteCarloOptions big = opt;
        big.min_errors = 500;
        big.max_trials = 1'000'000;
        const SerPoint pt = run_point(rc, sigma, big, 5, DetectorKind::joint, 84.0);
        const double naive = oracles::naive_ser(inst.cb, inst.h, 1.0, sigma, 60'000, 2024);
        const WilsonInterval ci_naive = wilson_interval(
            static_cast<std::uint64_t>(naive * 60'000 + 0.5), 60'000);
        CHECK(pt.ci.lo <= ci_naive.hi);
        CHECK(ci_naive.lo <= pt.ci.hi);
    }

    SECTION("option validation")
    {
        MonteCarloOptions bad;
        bad.min_errors = 0;
        CHECK_THROWS_AS(run_point(rc, 0.1, bad, 0, DetectorKind::joint, 0.0), std::invalid_argument);
        MonteCarloOptions bad2;
        bad2.max_trials = 10;
        bad2.min_errors = 100;
        CHECK_THROWS_AS(run_point(rc, 0.1, bad2, 0, DetectorKind::joint, 0.0), std::invalid_argument);
    }
}

TEST_CASE("run_sweep")
{
    oracles::SmallInstance inst;
    const ReceivedCodebook rc(inst.h, inst.cb, 1.0);
    MonteCarloOptions opt;
    opt.min_errors = 200;
    opt.max_trials = 200'000;
    opt.master_seed = 99;

    SECTION("empty SNR list is an error")
    {
        CHECK_THROWS_AS(run_sweep(rc, {}, 1.0, 1.0, opt, DetectorKind::joint), std::invalid_argument);
    }

    SECTION("output sorted by SNR, SER non-increasing within CI noise")
    {
        const std::vector<double> snrs{88.0, 80.0, 84.0, 76.0, 92.0};
        const SerCurve curve = run_sweep(rc, snrs, 1.0, 1.0, opt, DetectorKind::joint);
        REQUIRE(curve.points.size() == 5);
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            CHECK(curve.points[i].snr_db > curve.points[i - 1].snr_db);
            CHECK(curve.points[i].ci.lo <= curve.points[i - 1].ci.hi);
        }
    }

    SECTION("two-step SER matches joint SER realization for realization")
    {
        // identical noise substreams and literally equivalent decision rules
        const std::vector<double> snrs{80.0, 86.0, 92.0};
        const SerCurve joint = run_sweep(rc, snrs, 1.0, 1.0, opt, DetectorKind::joint);
        const SerCurve two = run_sweep(rc, snrs, 1.0, 1.0, opt, DetectorKind::two_step);
        for (std::size_t i = 0; i < snrs.size(); ++i) {
            CHECK(two.points[i].errors == joint.points[i].errors);
            CHECK(two.points[i].trials == joint.points[i].trials);
        }
    }
}
