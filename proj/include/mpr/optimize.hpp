#pragma once

// Bracketed golden-section maximizer for the unimodal throughput objectives.
// A coarse pre-scan locates the peak before the section search narrows it,
// which guards against flat tails at the interval edges.

#include <cmath>
#include <utility>

namespace mpr {

struct ScalarMax {
    double arg = 0.0;
    double value = 0.0;
    bool at_upper_edge = false;  // peak sits on the upper boundary of the bracket
};

template <typename F>
ScalarMax maximize_unimodal(F&& f, double lo, double hi, double xtol, int prescan_points = 256) {
    if (prescan_points < 3) prescan_points = 3;
    const double step = (hi - lo) / (prescan_points - 1);

    int best = 0;
    double best_val = f(lo);
    for (int i = 1; i < prescan_points; ++i) {
        const double v = f(lo + i * step);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const bool edge_scan = best == prescan_points - 1;
    double a = lo + (best > 0 ? (best - 1) * step : 0.0);
    double b = best < prescan_points - 1 ? lo + (best + 1) * step : hi;

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int iter = 0; iter < 300 && (b - a) > xtol; ++iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    ScalarMax result;
    result.arg = 0.5 * (a + b);
    result.value = f(result.arg);
    result.at_upper_edge = edge_scan || (hi - result.arg) <= 2.0 * xtol;
    return result;
}

}  // namespace mpr
