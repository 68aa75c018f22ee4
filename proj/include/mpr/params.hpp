#pragma once

// Core parameter types shared by the analytic formulas, the backoff solver
// and the slot-indexed simulator: network population, MAC timing, access
// mode and the per-slot-type durations derived from them.

#include <cmath>
#include <stdexcept>
#include <string>

namespace mpr {

struct NetworkParams {
    int stations = 1;             // contending saturated stations
    int capability = 1;           // max packets decodable in one slot
    double data_rate = 54e6;      // bits/second
    double payload_bits = 8184.0;

    void validate() const {
        if (stations < 1) throw std::invalid_argument("station count violates precondition N >= 1");
        if (capability < 1) throw std::invalid_argument("capability violates precondition M >= 1");
        if (!(data_rate > 0.0)) throw std::invalid_argument("data rate violates precondition R > 0");
        if (!(payload_bits > 0.0)) throw std::invalid_argument("payload violates precondition L > 0");
    }
};

// Airtimes in seconds. Control frames are priced by the caller (bits at the
// basic rate plus PHY overhead); this struct only carries the results.
struct MacTimingParams {
    double slot_time = 0.0;       // idle-slot detection time
    double header_airtime = 0.0;  // PHY preamble + MAC header
    double sifs = 0.0;
    double difs = 0.0;
    double delta = 0.0;           // propagation delay
    double ack_airtime = 0.0;
    double rts_airtime = 0.0;
    double cts_airtime = 0.0;

    void validate() const {
        for (double v : {slot_time, header_airtime, sifs, difs, delta,
                         ack_airtime, rts_airtime, cts_airtime}) {
            if (!(v >= 0.0)) throw std::invalid_argument("MAC timing violates precondition all fields >= 0");
        }
    }
};

enum class AccessMode { NonCarrierSensing, BasicAccess, RtsCts };

inline std::string to_string(AccessMode mode) {
    switch (mode) {
        case AccessMode::NonCarrierSensing: return "aloha";
        case AccessMode::BasicAccess: return "basic";
        case AccessMode::RtsCts: return "rtscts";
    }
    return "unknown";
}

inline AccessMode access_mode_from_string(const std::string& s) {
    if (s == "aloha" || s == "non-carrier-sensing") return AccessMode::NonCarrierSensing;
    if (s == "basic") return AccessMode::BasicAccess;
    if (s == "rtscts") return AccessMode::RtsCts;
    throw std::invalid_argument("access mode must be one of aloha|basic|rtscts (got \"" + s + "\")");
}

struct SlotDurations {
    double idle = 0.0;       // seconds
    double collision = 0.0;
    double success = 0.0;

    void validate() const {
        if (!(idle > 0.0 && collision > 0.0 && success > 0.0)) {
            throw std::invalid_argument("slot durations violate precondition all > 0");
        }
    }

    bool equal_slots() const {
        const double scale = std::max({idle, collision, success});
        return std::abs(idle - collision) <= 1e-12 * scale &&
               std::abs(idle - success) <= 1e-12 * scale;
    }
};

struct BackoffParams {
    double factor = 2.0;  // contention-window multiplier after a failure
    int min_window = 16;

    void validate() const {
        if (!(factor > 1.0)) throw std::invalid_argument("backoff factor violates precondition r > 1");
        if (min_window < 2) throw std::invalid_argument("minimum contention window violates precondition W0 >= 2");
    }
};

// Per-slot-type durations for the chosen access mode. Non-carrier-sensing
// stations cannot tell slot types apart, so every slot lasts one packet
// transmission time; carrier-sensing modes price idle, collision and
// success slots separately from the frame exchange sequence.
inline SlotDurations slot_durations(AccessMode mode, const NetworkParams& net,
                                    const MacTimingParams& timing) {
    net.validate();
    const double tx_time = net.payload_bits / net.data_rate;
    if (mode == AccessMode::NonCarrierSensing) {
        return {tx_time, tx_time, tx_time};
    }
    timing.validate();
    const double data = timing.header_airtime + tx_time;
    if (!(timing.slot_time < data)) {
        throw std::invalid_argument(
            "MAC timing violates precondition sigma < header + L/R (idle slots must be shorter than busy slots)");
    }
    SlotDurations d;
    d.idle = timing.slot_time;
    if (mode == AccessMode::BasicAccess) {
        d.success = data + timing.sifs + timing.delta + timing.ack_airtime + timing.difs + timing.delta;
        d.collision = data + timing.difs + timing.delta;
    } else {  // RtsCts
        d.success = timing.rts_airtime + timing.sifs + timing.delta + timing.cts_airtime +
                    timing.sifs + timing.delta + data + timing.sifs + timing.delta +
                    timing.ack_airtime + timing.difs + timing.delta;
        d.collision = timing.rts_airtime + timing.difs + timing.delta;
    }
    d.validate();
    return d;
}

// Equal-duration slots of one packet transmission time each.
inline SlotDurations equal_slot_durations(double payload_bits, double data_rate) {
    if (!(data_rate > 0.0)) throw std::invalid_argument("data rate violates precondition R > 0");
    if (!(payload_bits > 0.0)) throw std::invalid_argument("payload violates precondition L > 0");
    const double t = payload_bits / data_rate;
    return {t, t, t};
}

}  // namespace mpr
