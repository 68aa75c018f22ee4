#pragma once

// IEEE 802.11g reference parameters for the carrier-sensing studies.
// Control frames are sent at the basic rate behind a fixed PHY overhead;
// the data frame header rides at the data rate. DIFS is not part of the
// parameter set and is derived as SIFS + 2 * slot time. When mpr_frames is
// set, CTS and ACK carry one extra 6-byte receiver address per additional
// simultaneously served station.

#include "mpr/params.hpp"

namespace mpr {

struct Ieee80211g {
    double payload_bits = 8184.0;
    double mac_header_bits = 272.0;
    double phy_overhead = 26e-6;   // seconds
    double ack_bits = 112.0;
    double rts_bits = 160.0;
    double cts_bits = 112.0;
    double basic_rate = 6e6;       // bits/second, control frames
    double data_rate = 54e6;       // bits/second, payload
    double slot_time = 9e-6;
    double sifs = 10e-6;
    double propagation_delay = 1e-6;
    bool mpr_frames = false;

    double difs() const { return sifs + 2.0 * slot_time; }

    MacTimingParams timing(int capability = 1) const {
        const double extra_bits = mpr_frames ? 48.0 * (capability - 1) : 0.0;
        MacTimingParams t;
        t.slot_time = slot_time;
        t.header_airtime = phy_overhead + mac_header_bits / data_rate;
        t.sifs = sifs;
        t.difs = difs();
        t.delta = propagation_delay;
        t.ack_airtime = phy_overhead + (ack_bits + extra_bits) / basic_rate;
        t.rts_airtime = phy_overhead + rts_bits / basic_rate;
        t.cts_airtime = phy_overhead + (cts_bits + extra_bits) / basic_rate;
        return t;
    }

    NetworkParams net(int stations, int capability) const {
        return {stations, capability, data_rate, payload_bits};
    }
};

inline Ieee80211g default_table1() { return {}; }

}  // namespace mpr
