#pragma once

// Saturation throughput of a slotted random-access network whose channel
// decodes up to M simultaneous packets. Throughput is delivered payload
// bits per unit time, where a slot is idle (no attempt), a success slot
// (1..M attempts) or a collision slot (more than M attempts), each with
// its own duration. The finite-population form uses binomial attempt
// counts; the infinite-population form uses the Poisson limit at mean
// attempt rate lambda. Optimal operating points are located by a bracketed
// golden-section search and, where the stationarity condition has a closed
// form (equal slots, ideal success), polished by bisection on it.

#include <optional>
#include <vector>

#include "mpr/dist.hpp"
#include "mpr/optimize.hpp"
#include "mpr/params.hpp"
#include "mpr/success.hpp"

namespace mpr {

inline double throughput_finite(const NetworkParams& net, double p_t, const SlotDurations& dur,
                                const SuccessModel& success = {}) {
    net.validate();
    dur.validate();
    if (!(p_t >= 0.0 && p_t <= 1.0)) {
        throw std::invalid_argument("transmission probability violates precondition 0 <= p_t <= 1");
    }
    const int n = net.stations;
    const int m = net.capability;
    double delivered = 0.0;  // expected successful packets per slot
    double p_succ = 0.0;
    for (int k = 1; k <= std::min(m, n); ++k) {
        const double pk = binomial_pmf(n, k, p_t);
        p_succ += pk;
        delivered += k * pk * success(k, m);
    }
    const double p_idle = binomial_pmf(n, 0, p_t);
    const double p_coll = std::max(0.0, 1.0 - p_idle - p_succ);
    const double slot_time = p_idle * dur.idle + p_coll * dur.collision + p_succ * dur.success;
    return delivered * net.payload_bits / slot_time;
}

inline double throughput_asymptotic(int capability, double rate, const SlotDurations& dur,
                                    double payload_bits, const SuccessModel& success = {}) {
    if (capability < 1) throw std::invalid_argument("capability violates precondition M >= 1");
    if (!(rate >= 0.0)) throw std::invalid_argument("attempt rate violates precondition lambda >= 0");
    if (!(payload_bits > 0.0)) throw std::invalid_argument("payload violates precondition L > 0");
    dur.validate();
    if (rate == 0.0) return 0.0;
    double delivered = 0.0;
    double p_succ = 0.0;
    for (int k = 1; k <= capability; ++k) {
        const double pk = poisson_pmf(k, rate);
        p_succ += pk;
        delivered += k * pk * success(k, capability);
    }
    const double p_idle = poisson_pmf(0, rate);
    const double p_coll = std::max(0.0, 1.0 - p_idle - p_succ);
    const double slot_time = p_idle * dur.idle + p_coll * dur.collision + p_succ * dur.success;
    return delivered * payload_bits / slot_time;
}

struct OptimalRate {
    double rate = 0.0;        // attempt rate at the optimum
    double throughput = 0.0;  // bits/second
};

inline OptimalRate optimal_attempt_rate(int capability, const SlotDurations& dur,
                                        double payload_bits, const SuccessModel& success = {}) {
    if (capability < 1) throw std::invalid_argument("capability violates precondition M >= 1");
    auto objective = [&](double lam) {
        return throughput_asymptotic(capability, lam, dur, payload_bits, success);
    };
    ScalarMax best = maximize_unimodal(objective, 0.0, 2.0 * capability, 1e-9);
    double rate = best.arg;
    if (dur.equal_slots() && success.is_ideal()) {
        // The stationarity condition Pr{X <= M-1} = M Pr{X = M} is available
        // in closed form here; bisect on it to pin the optimum beyond the
        // floating-point plateau of the section search.
        auto slope = [capability](double lam) {
            return poisson_cdf(capability - 1, lam) - capability * poisson_pmf(capability, lam);
        };
        double lo = 1e-12, hi = 2.0 * capability;
        if (slope(lo) > 0.0 && slope(hi) < 0.0) {
            for (int i = 0; i < 200 && hi - lo > 1e-13 * capability; ++i) {
                const double mid = 0.5 * (lo + hi);
                (slope(mid) > 0.0 ? lo : hi) = mid;
            }
            rate = 0.5 * (lo + hi);
        }
    }
    return {rate, objective(rate)};
}

struct OptimalPt {
    double p_transmit = 0.0;
    double throughput = 0.0;
    bool degenerate = false;  // capability >= stations: collisions impossible, optimum p_t = 1
};

inline OptimalPt optimal_pt_finite(const NetworkParams& net, const SlotDurations& dur,
                                   const SuccessModel& success = {}) {
    net.validate();
    if (net.capability >= net.stations) {
        return {1.0, throughput_finite(net, 1.0, dur, success), true};
    }
    auto objective = [&](double p) { return throughput_finite(net, p, dur, success); };
    ScalarMax best = maximize_unimodal(objective, 0.0, 1.0, 1e-9);
    double p_star = best.arg;
    if (dur.equal_slots() && success.is_ideal()) {
        // Closed-form stationarity for the equal-slot ideal case:
        //   N Pr{X <= M} + (M+1)(1 - (M+1)/p) Pr{X = M+1} = 0.
        const int n = net.stations;
        const int m = net.capability;
        auto slope = [n, m](double p) {
            return n * binomial_cdf(n, m, p) +
                   (m + 1) * (1.0 - (m + 1) / p) * binomial_pmf(n, m + 1, p);
        };
        double lo = 1e-9, hi = 1.0 - 1e-9;
        if (slope(lo) > 0.0 && slope(hi) < 0.0) {
            for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
                const double mid = 0.5 * (lo + hi);
                (slope(mid) > 0.0 ? lo : hi) = mid;
            }
            p_star = 0.5 * (lo + hi);
        }
    }
    return {p_star, objective(p_star), false};
}

struct ScalingPoint {
    int capability = 0;
    double attempt_rate = 0.0;    // lambda* (asymptotic) or N p_t* (finite)
    double throughput = 0.0;      // bits/second at the optimum
    double per_capability = 0.0;  // throughput / capability
};

// Optimal throughput for every capability 1..capability_max, asymptotic by
// default or at a fixed finite population when one is given.
inline std::vector<ScalingPoint> scaling_curve(int capability_max, const SlotDurations& dur,
                                               double payload_bits,
                                               std::optional<int> finite_stations = std::nullopt,
                                               const SuccessModel& success = {}) {
    if (capability_max < 2) throw std::invalid_argument("capability range violates precondition M_max >= 2");
    if (finite_stations && capability_max > *finite_stations) {
        throw std::invalid_argument("capability range violates precondition M_max <= N");
    }
    std::vector<ScalingPoint> curve;
    curve.reserve(capability_max);
    for (int m = 1; m <= capability_max; ++m) {
        ScalingPoint pt;
        pt.capability = m;
        if (finite_stations) {
            NetworkParams net{*finite_stations, m, payload_bits / dur.success, payload_bits};
            const OptimalPt opt = optimal_pt_finite(net, dur, success);
            pt.attempt_rate = opt.p_transmit * *finite_stations;
            pt.throughput = opt.throughput;
        } else {
            const OptimalRate opt = optimal_attempt_rate(m, dur, payload_bits, success);
            pt.attempt_rate = opt.rate;
            pt.throughput = opt.throughput;
        }
        pt.per_capability = pt.throughput / m;
        curve.push_back(pt);
    }
    return curve;
}

// Single-packet-reception baseline: the same antenna budget is spent on
// boosting the per-link rate logarithmically instead of separating streams.
// capability plays the role of the antenna count.
inline double simo_throughput(const NetworkParams& net, double p_t, AccessMode mode,
                              const MacTimingParams& timing, double log_base = 2.0) {
    net.validate();
    if (!(log_base > 1.0)) throw std::invalid_argument("logarithm base violates precondition base > 1");
    const double boosted_rate =
        net.data_rate + std::log(static_cast<double>(net.capability)) / std::log(log_base);
    const NetworkParams simo_net{net.stations, 1, boosted_rate, net.payload_bits};
    const SlotDurations dur = slot_durations(mode, simo_net, timing);
    return throughput_finite(simo_net, p_t, dur);
}

// Large-population optimum of the baseline: (R + log(M)) / e.
inline double simo_asymptotic_optimum(double data_rate, int antennas, double log_base = 2.0) {
    if (antennas < 1) throw std::invalid_argument("antenna count violates precondition M >= 1");
    if (!(data_rate > 0.0)) throw std::invalid_argument("data rate violates precondition R > 0");
    if (!(log_base > 1.0)) throw std::invalid_argument("logarithm base violates precondition base > 1");
    return (data_rate + std::log(static_cast<double>(antennas)) / std::log(log_base)) *
           std::exp(-1.0);
}

}  // namespace mpr
