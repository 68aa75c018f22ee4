#pragma once

// Packet success probability P(k, M) for a packet transmitted alongside
// k-1 others on a channel that can decode up to M simultaneous packets.
// The default is the ideal step model: every packet survives when k <= M,
// none when k > M. A flat-error variant models residual channel errors.
// Custom models must be non-increasing in k and non-decreasing in M.

#include <functional>
#include <stdexcept>
#include <utility>

namespace mpr {

class SuccessModel {
public:
    SuccessModel() = default;  // ideal

    static SuccessModel ideal() { return SuccessModel(); }

    // (1 - eps) when k <= M, 0 otherwise.
    static SuccessModel with_error_rate(double eps) {
        if (!(eps >= 0.0 && eps < 1.0)) {
            throw std::invalid_argument("error rate violates precondition 0 <= eps < 1");
        }
        SuccessModel m;
        m.ideal_ = eps == 0.0;
        m.fn_ = [eps](int k, int capability) { return k <= capability ? 1.0 - eps : 0.0; };
        return m;
    }

    static SuccessModel custom(std::function<double(int, int)> fn) {
        SuccessModel m;
        m.ideal_ = false;
        m.fn_ = std::move(fn);
        return m;
    }

    double operator()(int transmitters, int capability) const {
        if (!fn_) return transmitters <= capability ? 1.0 : 0.0;
        return fn_(transmitters, capability);
    }

    bool is_ideal() const { return ideal_; }

private:
    std::function<double(int, int)> fn_;
    bool ideal_ = true;
};

}  // namespace mpr
