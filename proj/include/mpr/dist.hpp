#pragma once

// Poisson and binomial mass/distribution functions used throughout the
// throughput and backoff analysis. Everything goes through the log-gamma
// form so large populations and attempt rates stay finite.

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpr {

inline double poisson_pmf(int k, double rate) {
    if (rate < 0.0 || !std::isfinite(rate)) {
        throw std::invalid_argument("poisson attempt rate violates precondition lambda >= 0");
    }
    if (k < 0) return 0.0;
    if (rate == 0.0) return k == 0 ? 1.0 : 0.0;
    const double kd = static_cast<double>(k);
    return std::exp(kd * std::log(rate) - rate - std::lgamma(kd + 1.0));
}

// Pr{X <= k} for X ~ Poisson(rate).
inline double poisson_cdf(int k, double rate) {
    if (k < 0) return 0.0;
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) sum += poisson_pmf(j, rate);
    return std::min(sum, 1.0);
}

inline double binomial_pmf(int n, int k, double p) {
    if (n < 0) throw std::invalid_argument("binomial trial count violates precondition N >= 0");
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("transmission probability violates precondition 0 <= p_t <= 1");
    }
    if (k < 0 || k > n) return 0.0;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    const double log_choose =
        std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
    return std::exp(log_choose + kd * std::log(p) + (nd - kd) * std::log1p(-p));
}

// Pr{X <= k} for X ~ Binomial(n, p).
inline double binomial_cdf(int n, int k, double p) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) sum += binomial_pmf(n, j, p);
    return std::min(sum, 1.0);
}

}  // namespace mpr
