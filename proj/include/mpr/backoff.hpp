#pragma once

// Steady-state analysis of exponential backoff over a channel that decodes
// up to M simultaneous packets. The per-station transmission probability
// p_t and the conditional collision probability p_c are coupled by
//
//   p_t = 2 (1 - r p_c) / (W0 (1 - p_c) + 1 - r p_c)        (backoff chain)
//   p_c = Pr{ >= M of the other N-1 stations transmit }      (channel)
//
// whose unique intersection is found by bisection: p_t is decreasing in
// p_c while p_c is increasing in p_t. In the large-N limit p_c tends to
// 1/r and the aggregate attempt rate solves Pr{X <= M-1} = 1 - 1/r for a
// Poisson attempt count X.

#include "mpr/dist.hpp"
#include "mpr/optimize.hpp"
#include "mpr/params.hpp"
#include "mpr/throughput.hpp"

namespace mpr {

// Transmission probability of one saturated station given the collision
// probability it sees. A steady state requires r p_c < 1.
inline double pt_from_pc(double p_c, const BackoffParams& b) {
    b.validate();
    if (!(p_c >= 0.0 && p_c < 1.0)) {
        throw std::invalid_argument("collision probability violates precondition 0 <= p_c < 1");
    }
    if (b.factor * p_c >= 1.0) {
        throw std::domain_error("no steady state: requires r * p_c < 1");
    }
    return 2.0 * (1.0 - b.factor * p_c) /
           (b.min_window * (1.0 - p_c) + 1.0 - b.factor * p_c);
}

// Probability that a transmitted packet meets M or more of the other N-1
// stations in the same slot.
inline double pc_from_pt(double p_t, int stations, int capability) {
    if (stations < 1) throw std::invalid_argument("station count violates precondition N >= 1");
    if (capability < 1) throw std::invalid_argument("capability violates precondition M >= 1");
    if (!(p_t >= 0.0 && p_t <= 1.0)) {
        throw std::invalid_argument("transmission probability violates precondition 0 <= p_t <= 1");
    }
    if (capability >= stations) return 0.0;  // fewer than M others exist
    return 1.0 - binomial_cdf(stations - 1, capability - 1, p_t);
}

struct FixedPoint {
    double p_transmit = 0.0;
    double p_collision = 0.0;
    double residual = 0.0;  // |pt_from_pc(pc_from_pt(p_t)) - p_t| at the solution
};

inline FixedPoint solve_fixed_point(int stations, int capability, const BackoffParams& b) {
    if (stations < 2) throw std::invalid_argument("station count violates precondition N >= 2");
    if (capability < 1) throw std::invalid_argument("capability violates precondition M >= 1");
    b.validate();

    // g crosses zero exactly once; past the steady-state boundary
    // (r p_c >= 1) it is continued negatively so the bracket stays valid.
    auto g = [&](double pt) {
        const double pc = pc_from_pt(pt, stations, capability);
        if (b.factor * pc >= 1.0) return -1.0 - pt;
        return pt_from_pc(pc, b) - pt;
    };
    double lo = 0.0, hi = 1.0;
    if (!(g(lo) > 0.0)) {
        throw std::domain_error("no steady state: requires r * p_c < 1 across the fixed-point bracket");
    }
    for (int i = 0; i < 100 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    FixedPoint fp;
    fp.p_transmit = 0.5 * (lo + hi);
    fp.p_collision = pc_from_pt(fp.p_transmit, stations, capability);
    fp.residual = std::abs(pt_from_pc(fp.p_collision, b) - fp.p_transmit);
    return fp;
}

// Large-population aggregate attempt rate implied by backoff factor r:
// the unique root of Pr{X <= M-1} = 1 - 1/r, X ~ Poisson(lambda).
inline double asymptotic_attempt_rate(int capability, double factor) {
    if (capability < 1) throw std::invalid_argument("capability violates precondition M >= 1");
    if (!(factor > 1.0)) throw std::domain_error("backoff factor violates precondition r > 1");
    const double target = 1.0 - 1.0 / factor;
    double lo = 0.0;
    double hi = capability + 10.0 * std::sqrt(static_cast<double>(capability)) + 10.0;
    while (poisson_cdf(capability - 1, hi) > target) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (poisson_cdf(capability - 1, mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double asymptotic_throughput_of_r(int capability, double factor, const SlotDurations& dur,
                                         double payload_bits) {
    const double rate = asymptotic_attempt_rate(capability, factor);
    return throughput_asymptotic(capability, rate, dur, payload_bits);
}

struct OptimalBackoff {
    double factor = 0.0;
    double throughput = 0.0;
    bool at_bracket_edge = false;  // optimum hit factor_max; widen the bracket
};

inline OptimalBackoff optimal_backoff_factor(int capability, const SlotDurations& dur,
                                             double payload_bits, double factor_max = 64.0) {
    if (capability < 1) throw std::invalid_argument("capability violates precondition M >= 1");
    if (!(factor_max > 1.0)) throw std::invalid_argument("search bound violates precondition r_max > 1");
    auto objective = [&](double r) {
        if (!(r > 1.0)) return 0.0;
        return asymptotic_throughput_of_r(capability, r, dur, payload_bits);
    };
    const ScalarMax best = maximize_unimodal(objective, 1.0, factor_max, 1e-6);
    return {best.arg, best.value, best.at_upper_edge};
}

// Throughput of binary exponential backoff (r = 2) relative to the best
// achievable over the backoff factor.
inline double beb_efficiency(int capability, const SlotDurations& dur, double payload_bits,
                             double factor_max = 64.0) {
    const OptimalBackoff opt = optimal_backoff_factor(capability, dur, payload_bits, factor_max);
    const double beb = asymptotic_throughput_of_r(capability, 2.0, dur, payload_bits);
    return std::min(beb / opt.throughput, 1.0);
}

}  // namespace mpr
