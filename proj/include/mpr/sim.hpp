#pragma once

// Slot-indexed Monte-Carlo simulator of N saturated stations running
// exponential backoff over a channel that decodes up to M simultaneous
// packets. Time advances one backoff slot at a time; the slot type only
// changes how long it counts for in the time denominator, exactly as the
// analytic throughput expression prices it. A station whose counter hits
// zero transmits; up to M simultaneous transmissions are decodable (each
// surviving an independent success draw under a non-ideal model), more
// than M collide. Successful stations reset to backoff stage 0, failed
// ones move one stage up; window at stage i is round(r^i * W0).
//
// Randomness comes from one std::mt19937_64 stream seeded from the config,
// consumed in a fixed order (station index ascending), so runs are fully
// reproducible: identical config and seed give bit-identical statistics.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mpr/params.hpp"
#include "mpr/success.hpp"

namespace mpr::sim {

struct SimConfig {
    NetworkParams net;
    BackoffParams backoff;
    AccessMode mode = AccessMode::NonCarrierSensing;
    MacTimingParams timing;     // used by carrier-sensing modes only
    std::uint64_t warmup_slots = 100000;
    std::uint64_t measure_slots = 1000000;
    std::uint64_t seed = 1;
    SuccessModel success;

    void validate() const {
        net.validate();
        backoff.validate();
        if (measure_slots < 1) throw std::invalid_argument("measurement violates precondition measure_slots >= 1");
    }
};

struct SimStats {
    double pt_hat = 0.0;      // attempts / (N * measured slots)
    double pc_hat = 0.0;      // attempts made in collision slots / attempts
    double throughput = 0.0;  // delivered payload bits per second
    std::uint64_t idle_slots = 0;
    std::uint64_t success_slots = 0;
    std::uint64_t collision_slots = 0;
    std::vector<std::uint64_t> attempts_histogram;  // slots with k attempters, k = 0..N
    std::uint64_t window_cap_hits = 0;  // diagnostic: stage growth clamped at the window cap

    bool operator==(const SimStats&) const = default;
};

// Unbiased uniform draw from {0, ..., n-1} by rejection sampling.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % n;
    }
}

// 53-bit uniform in [0, 1).
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Per-run seed for batch fan-outs built from one base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) { return base ^ index; }

inline SimStats run(const SimConfig& cfg) {
    cfg.validate();
    const int n = cfg.net.stations;
    const int m = cfg.net.capability;
    const double payload = cfg.net.payload_bits;
    const SlotDurations dur = slot_durations(cfg.mode, cfg.net, cfg.timing);

    // Stage cap keeps r^i * W0 integrable in 64 bits; beyond it the window
    // freezes while retransmissions continue.
    constexpr int kMaxStage = 64;
    constexpr double kMaxWindow = 4.6e18;  // < 2^62
    std::vector<std::uint64_t> window(kMaxStage + 1);
    for (int i = 0; i <= kMaxStage; ++i) {
        const double w = std::round(std::pow(cfg.backoff.factor, i) * cfg.backoff.min_window);
        window[i] = static_cast<std::uint64_t>(std::min(std::max(w, 1.0), kMaxWindow));
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<int> stage(n, 0);
    std::vector<std::uint64_t> counter(n);
    for (int i = 0; i < n; ++i) counter[i] = uniform_below(rng, window[0]);

    SimStats stats;
    stats.attempts_histogram.assign(static_cast<std::size_t>(n) + 1, 0);
    std::uint64_t attempts = 0;
    std::uint64_t colliding_attempts = 0;
    std::uint64_t delivered_packets = 0;

    std::vector<int> transmitters;
    transmitters.reserve(n);
    const std::uint64_t total_slots = cfg.warmup_slots + cfg.measure_slots;
    for (std::uint64_t slot = 0; slot < total_slots; ++slot) {
        const bool measuring = slot >= cfg.warmup_slots;
        transmitters.clear();
        for (int i = 0; i < n; ++i) {
            if (counter[i] == 0) {
                transmitters.push_back(i);
            } else {
                --counter[i];
            }
        }
        const int k = static_cast<int>(transmitters.size());
        if (measuring) ++stats.attempts_histogram[k];
        if (k == 0) {
            if (measuring) ++stats.idle_slots;
            continue;
        }
        if (measuring) attempts += k;

        const bool decodable = k <= m;
        if (measuring) {
            if (decodable) {
                ++stats.success_slots;
            } else {
                ++stats.collision_slots;
                colliding_attempts += k;
            }
        }
        const double p_ok = decodable ? cfg.success(k, m) : 0.0;
        for (int i : transmitters) {
            bool ok = false;
            if (decodable) {
                ok = p_ok >= 1.0 || (p_ok > 0.0 && uniform_unit(rng) < p_ok);
            }
            if (ok) {
                stage[i] = 0;
                if (measuring) ++delivered_packets;
            } else if (stage[i] < kMaxStage) {
                ++stage[i];
            } else {
                ++stats.window_cap_hits;
            }
            counter[i] = uniform_below(rng, window[stage[i]]);
        }
    }

    const double elapsed = stats.idle_slots * dur.idle + stats.collision_slots * dur.collision +
                           stats.success_slots * dur.success;
    stats.pt_hat = static_cast<double>(attempts) /
                   (static_cast<double>(n) * static_cast<double>(cfg.measure_slots));
    stats.pc_hat = attempts > 0 ? static_cast<double>(colliding_attempts) / attempts : 0.0;
    stats.throughput = elapsed > 0.0 ? delivered_packets * payload / elapsed : 0.0;
    return stats;
}

// Independent runs, results in input order. All configs are validated
// before any run starts; runs execute concurrently up to max_threads
// (0 = hardware concurrency). Each run owns its RNG stream, so the result
// does not depend on the thread count.
inline std::vector<SimStats> sweep(const std::vector<SimConfig>& configs,
                                   unsigned max_threads = 0) {
    if (configs.empty()) throw std::invalid_argument("batch violates precondition non-empty config list");
    for (const auto& cfg : configs) cfg.validate();

    std::vector<SimStats> results(configs.size());
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned threads = max_threads == 0 ? hw : max_threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(configs.size()));

    if (threads <= 1) {
        for (std::size_t i = 0; i < configs.size(); ++i) results[i] = run(configs[i]);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= configs.size()) return;
                try {
                    results[i] = run(configs[i]);
                } catch (const std::exception& e) {
                    if (!failed.exchange(true)) first_error = e.what();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed) throw std::runtime_error("batch run failed: " + first_error);
    return results;
}

}  // namespace mpr::sim
