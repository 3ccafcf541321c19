// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "cgb/diagnostics.hpp"
#include "cgb/rng.hpp"
#include "cgb/walk_sim.hpp"
#include "cgb/wrapped_binomial.hpp"

namespace cgb {
namespace {

TEST(Philox, KnownAnswerVectors) {
    using C = Philox4x32::Counter;
    EXPECT_EQ(Philox4x32::generate(C{0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(StreamRng, UnitDrawsInRange) {
    StreamRng rng(42, 3);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        double u = rng.next_unit();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000.0, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / 100000.0));
}

WalkConfig cylinder(std::int64_t n, std::int64_t m, double p, std::int64_t balls, std::uint64_t seed) {
    WalkConfig c;
    c.rows = n;
    c.slots = m;
    c.p = p;
    c.balls = balls;
    c.seed = seed;
    return c;
}

TEST(SimulateBall, Deterministic) {
    auto right = simulate_ball(cylinder(5, 24, 1.0, 1, 0), 0);
    EXPECT_EQ(right.final_s, 5);
    EXPECT_EQ(right.bin, 5);
    EXPECT_EQ(right.steps, (std::vector<std::int8_t>{1, 1, 1, 1, 1}));
    EXPECT_NEAR(right.final_theta, 5.0 * (two_pi / 24.0) / 2.0, 1e-15);

    auto left = simulate_ball(cylinder(5, 24, 0.0, 1, 0), 0);
    EXPECT_EQ(left.final_s, -5);
    EXPECT_EQ(left.bin, 0);
    EXPECT_NEAR(left.final_theta, two_pi - 5.0 * (two_pi / 24.0) / 2.0, 1e-15);
    EXPECT_NEAR(left.final_z, -5.0 * 1.02, 1e-15);

    EXPECT_THROW(simulate_ball(cylinder(5, 24, 0.5, 3, 0), 3), DomainError);
}

TEST(SimulateBall, TraceInvariants) {
    auto config = cylinder(31, 24, 0.4, 500, 9);
    for (std::int64_t b = 0; b < config.balls; ++b) {
        auto t = simulate_ball(config, b);
        EXPECT_EQ(t.final_s, std::accumulate(t.steps.begin(), t.steps.end(), std::int64_t{0}));
        EXPECT_LE(std::abs(t.final_s), 31);
        EXPECT_EQ(((t.final_s - 31) % 2 + 2) % 2, 0);
        EXPECT_EQ(t.bin, ((t.final_s + 31) / 2) % 24);
    }
}

TEST(Simulate, ReproducibleAcrossThreadCounts) {
    auto config = cylinder(40, 24, 0.5, 20001, 12345);
    config.threads = 1;
    auto one = simulate(config).histogram;
    for (unsigned threads : {2u, 3u, 8u, 0u}) {
        config.threads = threads;
        EXPECT_EQ(simulate(config).histogram, one) << threads;
    }
    config.record_traces = true;
    config.threads = 4;
    auto with_traces = simulate(config);
    EXPECT_EQ(with_traces.histogram, one);
    EXPECT_EQ(with_traces.traces[777].steps, simulate_ball(config, 777).steps);
}

TEST(Simulate, SeedChangesOutcome) {
    EXPECT_NE(simulate(cylinder(40, 24, 0.5, 2000, 1)).histogram, simulate(cylinder(40, 24, 0.5, 2000, 2)).histogram);
}

TEST(Simulate, TwoThousandBallsCloseToExact) {
    auto h = simulate(cylinder(40, 24, 0.5, 2000, 1)).histogram;
    EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::int64_t{0}), h.total);
    auto exact = full_pmf(WrappedBinomial(40, 24, 0.5));
    EXPECT_LT(compare(h, exact).tv, 0.05);
}

TEST(Simulate, MeanOfSumNearZero) {
    auto config = cylinder(8, 24, 0.5, 100000, 3);
    config.record_traces = true;
    auto run = simulate(config);
    double mean = 0.0;
    for (const auto& t : run.traces) mean += static_cast<double>(t.final_s);
    mean /= static_cast<double>(run.traces.size());
    EXPECT_LT(std::abs(mean), 3.0 * std::sqrt(8.0) / std::sqrt(100000.0));
}

TEST(Simulate, DistributionalCorrectness) {
    for (std::int64_t n : {1, 4, 9, 16}) {
        for (std::int64_t m : {5, 24}) {
            auto h = simulate(cylinder(n, m, 0.5, 1000000, 100 + n)).histogram;
            EXPECT_LT(compare(h, full_pmf(WrappedBinomial(n, m, 0.5))).tv, 0.005) << n << " " << m;
        }
    }
}

TEST(Simulate, WrapThroughPastM) {
    auto config = cylinder(40, 24, 0.5, 5000, 4);
    config.record_traces = true;
    auto run = simulate(config);
    std::int64_t wrapped = 0;
    for (const auto& t : run.traces) {
        std::int64_t rights = (t.final_s + 40) / 2;
        if (rights >= 24) ++wrapped;
    }
    EXPECT_GT(wrapped, 0);
}

TEST(Simulate, RejectsInvalidConfig) {
    EXPECT_THROW(simulate(cylinder(8, 24, 0.5, 0, 0)), ValidationError);
    EXPECT_THROW(simulate(cylinder(-1, 24, 0.5, 1, 0)), ValidationError);
    EXPECT_THROW(simulate(cylinder(8, 24, 1.1, 1, 0)), ValidationError);
    EXPECT_THROW(simulate(cylinder(8, 0, 0.5, 1, 0)), ValidationError);
}

WalkConfig planar(std::int64_t n, double p, std::int64_t balls, std::uint64_t seed) {
    WalkConfig c;
    c.rows = n;
    c.p = p;
    c.balls = balls;
    c.seed = seed;
    return c;
}

TEST(Planar, ElevenBins) {
    auto h = planar_histogram(planar(10, 0.5, 10000, 5));
    EXPECT_EQ(h.slots(), 11u);
    EXPECT_EQ(h.total, 10000);
    EXPECT_THROW(planar_histogram(cylinder(10, 24, 0.5, 10, 0)), ValidationError);
}

TEST(Planar, OneRowSplitsEvenly) {
    auto h = planar_histogram(planar(1, 0.5, 100000, 6));
    ASSERT_EQ(h.slots(), 2u);
    EXPECT_NEAR(h.frequency(0), 0.5, 4.0 * std::sqrt(0.25 / 100000.0));
}

TEST(Planar, MatchesBinomial) {
    auto h = planar_histogram(planar(10, 0.5, 100000, 7));
    // WB(n, n + 1) never wraps, so it is Bin(n, p) itself
    auto report = compare(h, full_pmf(WrappedBinomial(10, 11, 0.5)));
    EXPECT_GT(report.p_value, 0.001);

    double mean = 0.0;
    double second = 0.0;
    for (std::size_t x = 0; x < h.slots(); ++x) {
        mean += static_cast<double>(x) * h.frequency(x);
        second += static_cast<double>(x * x) * h.frequency(x);
    }
    EXPECT_NEAR(second - mean * mean, 2.5, 0.05 * 2.5);
}

TEST(Planar, ZeroRowsIsSingleBin) {
    auto h = planar_histogram(planar(0, 0.5, 50, 0));
    ASSERT_EQ(h.slots(), 1u);
    EXPECT_EQ(h.counts[0], 50);
}

TEST(UnwrappedStats, MomentsMatchFormulae) {
    const std::int64_t balls = 100000;
    {
        auto config = cylinder(8, 24, 0.5, balls, 11);
        config.record_traces = true;
        auto s = unwrapped_stats(simulate(config).traces, config.slots);
        double se = std::sqrt(8 * 0.25 * std::pow(two_pi / 24.0, 2) / balls);
        EXPECT_LT(std::abs(s.mean), 4.0 * se);
    }
    {
        auto config = cylinder(8, 24, 0.75, balls, 12);
        config.record_traces = true;
        auto s = unwrapped_stats(simulate(config).traces, config.slots);
        double se = std::sqrt(8 * 0.1875 * std::pow(two_pi / 24.0, 2) / balls);
        EXPECT_LT(std::abs(s.mean - pi / 6.0), 4.0 * se);
    }
    {
        auto config = cylinder(24, 24, 0.5, balls, 13);
        config.record_traces = true;
        auto s = unwrapped_stats(simulate(config).traces, config.slots);
        double expected = 24 * 0.25 * std::pow(pi / 12.0, 2);
        EXPECT_NEAR(s.variance, expected, 0.05 * expected);
    }
    EXPECT_THROW(unwrapped_stats({}, 24), DomainError);
}

TEST(Histogram, CsvSchema) {
    BinHistogram h{{3, 1}, 4};
    std::ostringstream os;
    write_csv(os, h);
    EXPECT_EQ(os.str(), "slot,count,frequency\n0,3,0.75\n1,1,0.25\n");
}

} // namespace
} // namespace cgb
