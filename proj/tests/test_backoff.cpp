#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mpr/backoff.hpp"
#include "mpr/ieee80211g.hpp"

using namespace mpr;

namespace {

const SlotDurations kUnitSlots{1.0, 1.0, 1.0};

// Independent fixed-point oracle: damped direct iteration of the two
// coupled equations, no bisection involved.
double oracle_fixed_point_pt(int n, int m, const BackoffParams& b) {
    double pt = 1e-3;
    for (int i = 0; i < 200000; ++i) {
        const double pc = pc_from_pt(pt, n, m);
        const double mapped = pt_from_pc(std::min(pc, 1.0 / b.factor - 1e-12), b);
        pt = 0.995 * pt + 0.005 * mapped;
    }
    return pt;
}

}  // namespace

TEST_CASE("transmission probability from collision probability") {
    CHECK(pt_from_pc(0.0, {2.0, 16}) == Catch::Approx(2.0 / 17.0).epsilon(1e-14));
    CHECK(pt_from_pc(0.0, {2.0, 32}) == Catch::Approx(2.0 / 33.0).epsilon(1e-14));
    // Direct arithmetic check: 2(1-0.8) / (16*0.6 + 1 - 0.8).
    CHECK(pt_from_pc(0.4, {2.0, 16}) == Catch::Approx(0.4 / 9.8).epsilon(1e-14));

    CHECK_THROWS_AS(pt_from_pc(0.5, {2.0, 16}), std::domain_error);  // r p_c = 1
    CHECK_THROWS_AS(pt_from_pc(-0.1, {2.0, 16}), std::invalid_argument);
}

TEST_CASE("collision probability from transmission probability") {
    CHECK(pc_from_pt(0.0, 50, 1) == 0.0);
    // One other station, single-packet channel: collision iff it transmits.
    CHECK(pc_from_pt(0.5, 2, 1) == Catch::Approx(0.5).epsilon(1e-12));
    // Capability at or above the population leaves nothing to collide with.
    CHECK(pc_from_pt(0.9, 4, 4) == 0.0);
    CHECK(pc_from_pt(0.9, 4, 7) == 0.0);
    // Monotone in p_t.
    double prev = -1.0;
    for (double pt : {0.01, 0.05, 0.1, 0.3, 0.7}) {
        const double pc = pc_from_pt(pt, 20, 2);
        CHECK(pc > prev);
        prev = pc;
    }
}

TEST_CASE("fixed point of the coupled system") {
    // Collisions impossible: the chain collapses to p_t = 2/(W0+1).
    const FixedPoint trivial = solve_fixed_point(2, 2, {4.0, 16});
    CHECK(trivial.p_collision == 0.0);
    CHECK(trivial.p_transmit == Catch::Approx(2.0 / 17.0).epsilon(1e-12));

    const FixedPoint fp = solve_fixed_point(50, 1, {2.0, 16});
    CHECK(fp.residual < 1e-10);
    CHECK(fp.p_collision * 2.0 < 1.0);
    CHECK(fp.p_transmit ==
          Catch::Approx(oracle_fixed_point_pt(50, 1, {2.0, 16})).epsilon(1e-6));
    // Already within 7% of the large-population rate at 50 stations.
    CHECK(std::abs(50.0 * fp.p_transmit - std::log(2.0)) / std::log(2.0) < 0.07);

    // Wider minimum window backs off harder.
    const FixedPoint fp32 = solve_fixed_point(50, 1, {2.0, 32});
    CHECK(fp32.p_transmit < fp.p_transmit);
    CHECK(fp32.residual < 1e-10);

    // The solution is the unique sign change of the bracket map.
    {
        const BackoffParams b{2.0, 16};
        auto g = [&](double pt) {
            const double pc = pc_from_pt(pt, 50, 1);
            if (b.factor * pc >= 1.0) return -1.0 - pt;
            return pt_from_pc(pc, b) - pt;
        };
        int sign_changes = 0;
        double prev = g(0.0);
        for (int i = 1; i <= 1024; ++i) {
            const double cur = g(i / 1024.0);
            if ((prev > 0.0) != (cur > 0.0)) ++sign_changes;
            prev = cur;
        }
        CHECK(sign_changes == 1);
    }
}

TEST_CASE("asymptotic attempt rate from the backoff factor") {
    CHECK(asymptotic_attempt_rate(1, 2.0) == Catch::Approx(std::log(2.0)).margin(1e-9));

    // Capability 2: root of e^-x (1 + x) = 1/2.
    const double lam2 = asymptotic_attempt_rate(2, 2.0);
    CHECK(std::exp(-lam2) * (1.0 + lam2) == Catch::Approx(0.5).margin(1e-9));
    CHECK(lam2 == Catch::Approx(1.6783).margin(1e-4));

    // r -> 1+ floods the channel (the collision share 1 - 1/r vanishes only
    // when nearly every attempt gets through, which needs a huge rate), and
    // r -> infinity starves it.
    CHECK(asymptotic_attempt_rate(1, 1.0001) > 9.0);  // e^-x = 1e-4
    CHECK(asymptotic_attempt_rate(1, 1e9) < 1e-8);
    CHECK_THROWS_AS(asymptotic_attempt_rate(1, 1.0), std::domain_error);
    CHECK_THROWS_AS(asymptotic_attempt_rate(1, 0.5), std::domain_error);
}

TEST_CASE("asymptotic throughput of a backoff factor") {
    // Compose the two closed forms: rate ln 2 delivered with probability 1/2.
    CHECK(asymptotic_throughput_of_r(1, 2.0, kUnitSlots, 1.0) ==
          Catch::Approx(std::log(2.0) * 0.5).margin(1e-9));

    // Factor hitting the unconstrained optimum: lambda = 1, share 1/e.
    const double r_opt = std::exp(1.0) / (std::exp(1.0) - 1.0);
    CHECK(asymptotic_throughput_of_r(1, r_opt, kUnitSlots, 1.0) ==
          Catch::Approx(std::exp(-1.0)).margin(1e-6));

    // Equal slots: throughput / (R lambda) = 1 - 1/r identically.
    for (int m : {1, 2, 4, 8}) {
        for (double r : {1.5, 2.0, 4.0, 8.0}) {
            const double lam = asymptotic_attempt_rate(m, r);
            const double s = asymptotic_throughput_of_r(m, r, kUnitSlots, 1.0);
            CAPTURE(m, r);
            CHECK(s / lam == Catch::Approx(1.0 - 1.0 / r).margin(1e-9));
        }
    }
}

TEST_CASE("optimal backoff factor") {
    const OptimalBackoff m1 = optimal_backoff_factor(1, kUnitSlots, 1.0);
    CHECK(m1.factor == Catch::Approx(std::exp(1.0) / (std::exp(1.0) - 1.0)).margin(1e-5));
    CHECK_FALSE(m1.at_bracket_edge);

    const OptimalBackoff m10 = optimal_backoff_factor(10, kUnitSlots, 1.0);
    CHECK(m10.factor > 2.0);

    // The implied attempt rate matches the direct optimum.
    for (int m : {1, 2, 4, 10}) {
        const OptimalBackoff opt = optimal_backoff_factor(m, kUnitSlots, 1.0);
        const double lam = asymptotic_attempt_rate(m, opt.factor);
        const double lam_star = optimal_attempt_rate(m, kUnitSlots, 1.0).rate;
        CAPTURE(m);
        CHECK(std::abs(lam - lam_star) < 1e-4);
    }

    // A bracket too small to contain the optimum is flagged.
    CHECK(optimal_backoff_factor(10, kUnitSlots, 1.0, 2.0).at_bracket_edge);
}

TEST_CASE("binary exponential backoff efficiency") {
    CHECK(beb_efficiency(1, kUnitSlots, 1.0) ==
          Catch::Approx(std::log(2.0) * 0.5 / std::exp(-1.0)).margin(1e-6));
    const double eff10 = beb_efficiency(10, kUnitSlots, 1.0);
    CHECK(eff10 > 0.75);
    CHECK(eff10 < 0.85);
}

TEST_CASE("throughput falls off faster below the optimal factor than above") {
    for (int m : {4, 6, 10}) {
        const double r_star = optimal_backoff_factor(m, kUnitSlots, 1.0).factor;
        CAPTURE(m, r_star);
        REQUIRE(r_star / 1.3 > 1.0);
        CHECK(asymptotic_throughput_of_r(m, r_star / 1.3, kUnitSlots, 1.0) <
              asymptotic_throughput_of_r(m, 1.3 * r_star, kUnitSlots, 1.0));
    }
}

TEST_CASE("optimal factor grows with capability") {
    double prev = 0.0;
    for (int m = 3; m <= 15; ++m) {
        const double r_star = optimal_backoff_factor(m, kUnitSlots, 1.0).factor;
        CAPTURE(m);
        CHECK(r_star >= prev - 1e-4);
        prev = r_star;
    }

    // Basic access: expensive collisions push the optimum around at small
    // capability (it dips once from 3 to 4) before the growth takes over.
    const Ieee80211g table = default_table1();
    const SlotDurations basic =
        slot_durations(AccessMode::BasicAccess, table.net(50, 1), table.timing());
    std::vector<double> r_basic;
    for (int m = 3; m <= 15; ++m) {
        r_basic.push_back(optimal_backoff_factor(m, basic, table.payload_bits).factor);
    }
    CHECK(r_basic[1] < r_basic[0]);
    for (std::size_t i = 2; i < r_basic.size(); ++i) {
        CAPTURE(i);
        CHECK(r_basic[i] >= r_basic[i - 1] - 1e-4);
    }
}

TEST_CASE("finite fixed point approaches the asymptotic law") {
    for (int m : {1, 2, 4, 8}) {
        const FixedPoint fp = solve_fixed_point(2000, m, {2.0, 16});
        const double lam = asymptotic_attempt_rate(m, 2.0);
        CAPTURE(m);
        CHECK(std::abs(2000.0 * fp.p_transmit - lam) / lam < 0.02);
        CHECK(std::abs(fp.p_collision - 0.5) / 0.5 < 0.02);  // p_c -> 1/r
    }
}
