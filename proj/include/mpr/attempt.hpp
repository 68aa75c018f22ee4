#pragma once

// Distribution of the number of simultaneous transmission attempts in one
// backoff slot: binomial for a finite population of N stations each
// transmitting with probability p_t, Poisson for the large-N limit with
// mean attempt rate lambda.

#include <stdexcept>
#include <variant>

#include "mpr/dist.hpp"

namespace mpr {

struct BinomialAttempts {
    int stations = 1;
    double p_transmit = 0.0;
};

struct PoissonAttempts {
    double rate = 0.0;
};

using AttemptModel = std::variant<BinomialAttempts, PoissonAttempts>;

// Pr{X = k} under the model; k outside the support yields 0.
inline double attempt_pmf(const AttemptModel& model, int k) {
    if (const auto* b = std::get_if<BinomialAttempts>(&model)) {
        if (b->stations < 1) throw std::invalid_argument("station count violates precondition N >= 1");
        return binomial_pmf(b->stations, k, b->p_transmit);
    }
    return poisson_pmf(k, std::get<PoissonAttempts>(model).rate);
}

}  // namespace mpr
