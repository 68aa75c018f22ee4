#pragma once

// PHY building blocks for receiving several packets at once on a
// multi-antenna receiver: synthetic Rayleigh channel blocks, linear
// multiuser detectors (zero-forcing and MMSE), SVD source counting, and
// finite-alphabet blind separation of an unknown symbol block, both by
// exact enumeration and by iterative least squares with projection.
//
// A block is Y = H X + W with H (antennas x sources) complex Gaussian,
// X (sources x block length) drawn from a finite alphabet, and W white
// complex Gaussian noise of total variance noise_var per entry. Blind
// estimates identify X only up to row permutation and the alphabet's
// scalar symmetries (sign flips for BPSK); results are reported in a
// canonical form and can be aligned against a known truth.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpr::phy {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

struct Alphabet {
    std::vector<Complex> symbols;
    std::string name;

    static Alphabet bpsk() { return {{Complex(1.0, 0.0), Complex(-1.0, 0.0)}, "bpsk"}; }

    static Alphabet qpsk() {
        const double s = 1.0 / std::sqrt(2.0);
        return {{Complex(s, s), Complex(s, -s), Complex(-s, s), Complex(-s, -s)}, "qpsk"};
    }

    void validate() const {
        if (symbols.empty()) throw std::invalid_argument("alphabet violates precondition non-empty symbol set");
    }

    Complex quantize(Complex z) const {
        Complex best = symbols.front();
        double best_d = std::norm(z - best);
        for (std::size_t i = 1; i < symbols.size(); ++i) {
            const double d = std::norm(z - symbols[i]);
            if (d < best_d) {
                best_d = d;
                best = symbols[i];
            }
        }
        return best;
    }

    // Unit-modulus scalars s with s * alphabet == alphabet (as a set).
    std::vector<Complex> symmetry_scalars() const {
        validate();
        std::vector<Complex> out;
        for (const Complex& w : symbols) {
            const Complex s = w / symbols.front();
            bool seen = false;
            for (const Complex& t : out) seen = seen || std::abs(t - s) < 1e-12;
            if (seen) continue;
            bool closed = true;
            for (const Complex& u : symbols) {
                bool hit = false;
                for (const Complex& v : symbols) hit = hit || std::abs(s * u - v) < 1e-9;
                closed = closed && hit;
            }
            if (closed) out.push_back(s);
        }
        return out;
    }
};

struct SignalBlock {
    CMatrix channel;   // antennas x sources
    CMatrix symbols;   // sources x block length
    CMatrix received;  // antennas x block length
    double noise_var = 0.0;
    Alphabet alphabet = Alphabet::bpsk();
};

struct IlspIteration {
    double before_channel_update = 0.0;
    double after_channel_update = 0.0;
};

struct DetectionResult {
    CMatrix symbols;                 // entries drawn from the alphabet
    std::optional<CMatrix> channel;  // estimate, when the detector produces one
    double residual = 0.0;           // squared Frobenius misfit of the fitted model
    bool converged = true;
    std::vector<IlspIteration> iterations;  // filled by the iterative detector
};

namespace detail {

inline Complex complex_gaussian(std::mt19937_64& rng, std::normal_distribution<double>& gauss,
                                double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = gauss(rng);
    const double im = gauss(rng);
    return {re * s, im * s};
}

inline double squared_misfit(const CMatrix& received, const CMatrix& channel,
                             const CMatrix& symbols) {
    return (received - channel * symbols).squaredNorm();
}

inline CMatrix pseudo_inverse_apply(const CMatrix& a, const CMatrix& b) {
    // Least-squares solve a * x = b, rank-deficiency tolerated.
    return a.completeOrthogonalDecomposition().solve(b);
}

inline CMatrix channel_from_symbols(const CMatrix& received, const CMatrix& symbols) {
    // H = Y X^+ ; transposed solve keeps it a single decomposition.
    return symbols.transpose()
        .completeOrthogonalDecomposition()
        .solve(received.transpose())
        .transpose();
}

// Total order on complex values used for canonical forms.
inline bool complex_less(const Complex& a, const Complex& b) {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
    if (std::abs(a.imag() - b.imag()) > 1e-9) return a.imag() < b.imag();
    return false;
}

inline bool row_less(const CMatrix& m, int a, int b) {
    for (int c = 0; c < m.cols(); ++c) {
        if (complex_less(m(a, c), m(b, c))) return true;
        if (complex_less(m(b, c), m(a, c))) return false;
    }
    return false;
}

}  // namespace detail

// Random block: channel entries are unit-variance complex Gaussian, symbols
// uniform over the alphabet, noise variance set from the SNR against unit
// per-symbol energy. Fully deterministic for a given seed. Zero sources
// gives a noise-only block.
inline SignalBlock synthesize(int antennas, int sources, int block_len, const Alphabet& alphabet,
                              double snr_db, std::uint64_t seed) {
    alphabet.validate();
    if (antennas < 1) throw std::invalid_argument("antenna count violates precondition M_ant >= 1");
    if (block_len < 1) throw std::invalid_argument("block length violates precondition N_sym >= 1");
    if (sources < 0 || sources > antennas) {
        throw std::invalid_argument("source count violates precondition 0 <= K <= M_ant");
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SignalBlock block;
    block.alphabet = alphabet;
    block.channel.resize(antennas, sources);
    for (int r = 0; r < antennas; ++r)
        for (int c = 0; c < sources; ++c)
            block.channel(r, c) = detail::complex_gaussian(rng, gauss, 1.0);

    block.symbols.resize(sources, block_len);
    const std::uint64_t cardinality = alphabet.symbols.size();
    for (int r = 0; r < sources; ++r) {
        for (int c = 0; c < block_len; ++c) {
            std::uint64_t idx = rng() % cardinality;
            block.symbols(r, c) = alphabet.symbols[static_cast<std::size_t>(idx)];
        }
    }

    block.noise_var = std::isinf(snr_db) ? 0.0 : std::pow(10.0, -snr_db / 10.0);
    block.received = block.channel * block.symbols;
    if (block.noise_var > 0.0) {
        for (int r = 0; r < antennas; ++r)
            for (int c = 0; c < block_len; ++c)
                block.received(r, c) += detail::complex_gaussian(rng, gauss, block.noise_var);
    }
    return block;
}

// Zero-forcing: apply the channel pseudo-inverse, then quantize entrywise.
// Requires a well-conditioned full-column-rank channel.
inline DetectionResult zf_detect(const SignalBlock& block) {
    if (block.channel.cols() < 1) throw std::invalid_argument("detection requires K >= 1 sources");
    Eigen::JacobiSVD<CMatrix> svd(block.channel, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > 1e8) {
        throw std::domain_error("channel rank-deficient: condition number exceeds 1e8");
    }
    CMatrix soft = svd.solve(block.received);
    DetectionResult result;
    result.symbols = soft.unaryExpr([&](Complex z) { return block.alphabet.quantize(z); });
    result.residual = detail::squared_misfit(block.received, block.channel, result.symbols);
    return result;
}

// Linear MMSE: (H^H H + eta I)^-1 H^H Y, then quantize. With eta = 0 and a
// full-rank channel this coincides with zero-forcing.
inline DetectionResult mmse_detect(const SignalBlock& block) {
    if (block.channel.cols() < 1) throw std::invalid_argument("detection requires K >= 1 sources");
    const CMatrix& h = block.channel;
    CMatrix soft;
    if (block.noise_var > 0.0) {
        const int k = static_cast<int>(h.cols());
        CMatrix gram = h.adjoint() * h + block.noise_var * CMatrix::Identity(k, k);
        soft = gram.ldlt().solve(h.adjoint() * block.received);
    } else {
        soft = detail::pseudo_inverse_apply(h, block.received);
    }
    DetectionResult result;
    result.symbols = soft.unaryExpr([&](Complex z) { return block.alphabet.quantize(z); });
    result.residual = detail::squared_misfit(block.received, h, result.symbols);
    return result;
}

// Number of sources behind a received block: singular values of Y that
// stand clear of the noise floor, judged relative to the largest one.
inline int estimate_source_count(const CMatrix& received, double threshold = 0.1) {
    if (received.size() == 0) throw std::invalid_argument("source counting requires a non-empty block");
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold violates precondition > 0");
    Eigen::JacobiSVD<CMatrix> svd(received);
    const auto& sv = svd.singularValues();
    const double top = sv(0);
    if (!(top > 0.0)) return 0;
    int count = 0;
    for (int i = 0; i < sv.size(); ++i) count += sv(i) > threshold * top;
    return count;
}

// Canonical representative of a blind estimate's symmetry orbit: each row
// is scaled by the symmetry scalar that makes it lexicographically
// smallest, then rows are sorted.
inline CMatrix canonicalize(const CMatrix& symbols, const Alphabet& alphabet) {
    const auto scalars = alphabet.symmetry_scalars();
    CMatrix out = symbols;
    for (int r = 0; r < out.rows(); ++r) {
        CMatrix best = out.row(r);
        for (const Complex& s : scalars) {
            CMatrix cand = (s * out.row(r)).unaryExpr([&](Complex z) { return alphabet.quantize(z); });
            CMatrix pair(2, out.cols());
            pair.row(0) = cand;
            pair.row(1) = best;
            if (detail::row_less(pair, 0, 1)) best = cand;
        }
        out.row(r) = best;
    }
    std::vector<int> order(static_cast<std::size_t>(out.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return detail::row_less(out, a, b); });
    CMatrix sorted(out.rows(), out.cols());
    for (int r = 0; r < out.rows(); ++r) sorted.row(r) = out.row(order[static_cast<std::size_t>(r)]);
    return sorted;
}

// Global minimizer of || Y P_perp(X) ||_F^2 over all full-row-rank symbol
// blocks, by enumeration. The projector identity makes each candidate cost
// || Y ||^2 - tr( Y X^H (X X^H)^-1 X Y^H ), and the channel estimate for
// the winner is H = Y X^+.
inline DetectionResult blind_detect_exhaustive(const CMatrix& received, int sources,
                                               const Alphabet& alphabet) {
    alphabet.validate();
    if (sources < 1) throw std::invalid_argument("blind detection requires K >= 1 sources");
    if (sources > received.rows()) {
        throw std::invalid_argument("source count violates precondition K <= M_ant");
    }
    const int block_len = static_cast<int>(received.cols());
    const double q = static_cast<double>(alphabet.symbols.size());
    const double entries = static_cast<double>(sources) * block_len;
    if (entries * std::log2(q) > 24.0) {
        throw std::invalid_argument("search space exceeds 2^24 candidates; use the iterative detector");
    }
    std::uint64_t total = 1;
    for (int i = 0; i < sources * block_len; ++i) total *= alphabet.symbols.size();

    const double base_energy = received.squaredNorm();
    CMatrix x(sources, block_len);
    std::vector<std::size_t> digits(static_cast<std::size_t>(sources) * block_len, 0);
    Eigen::LDLT<CMatrix> ldlt(sources);

    double best_residual = std::numeric_limits<double>::infinity();
    CMatrix best_x;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        for (int r = 0; r < sources; ++r)
            for (int c = 0; c < block_len; ++c)
                x(r, c) = alphabet.symbols[digits[static_cast<std::size_t>(r * block_len + c)]];

        CMatrix gram = x * x.adjoint();
        ldlt.compute(gram);
        const Eigen::VectorXd d = ldlt.vectorD().real();
        const double dmin = d.minCoeff();
        const double dmax = d.maxCoeff();
        if (dmin > 1e-9 * dmax) {  // full row rank only
            CMatrix cross = received * x.adjoint();  // Y X^H
            const double projected = (cross * ldlt.solve(cross.adjoint())).trace().real();
            const double residual = std::max(base_energy - projected, 0.0);
            if (residual < best_residual) {
                best_residual = residual;
                best_x = x;
            }
        }

        for (std::size_t pos = 0; pos < digits.size(); ++pos) {  // odometer
            if (++digits[pos] < alphabet.symbols.size()) break;
            digits[pos] = 0;
        }
    }
    if (!best_x.size()) throw std::domain_error("no full-row-rank candidate in the search space");

    DetectionResult result;
    result.symbols = canonicalize(best_x, alphabet);
    result.channel = detail::channel_from_symbols(received, result.symbols);
    result.residual = detail::squared_misfit(received, *result.channel, result.symbols);
    return result;
}

struct IlspOptions {
    int max_iterations = 50;
    int restarts = 8;
    std::uint64_t seed = 0;
    std::optional<CMatrix> channel_init;  // used by the first start
};

// Iterative least squares with projection: alternate a least-squares symbol
// estimate quantized to the alphabet with the closed-form channel update
// H = Y X^+. The channel update never increases the squared misfit for the
// current symbols; iteration stops at a fixed point of the symbol estimate
// or at the iteration cap (reported through `converged`). Random restarts
// keep the best residual.
inline DetectionResult blind_detect_ilsp(const CMatrix& received, int sources,
                                         const Alphabet& alphabet, const IlspOptions& opts = {}) {
    alphabet.validate();
    if (sources < 1) throw std::invalid_argument("blind detection requires K >= 1 sources");
    if (sources > received.rows()) {
        throw std::invalid_argument("source count violates precondition K <= M_ant");
    }
    if (opts.max_iterations < 1 || opts.restarts < 1) {
        throw std::invalid_argument("iteration budget violates precondition >= 1");
    }
    if (opts.channel_init &&
        (opts.channel_init->rows() != received.rows() || opts.channel_init->cols() != sources)) {
        throw std::invalid_argument("channel initializer shape must be M_ant x K");
    }

    DetectionResult best;
    best.residual = std::numeric_limits<double>::infinity();
    best.converged = false;

    for (int restart = 0; restart < opts.restarts; ++restart) {
        CMatrix channel;
        if (restart == 0 && opts.channel_init) {
            channel = *opts.channel_init;
        } else {
            std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(restart) + 1);
            std::normal_distribution<double> gauss(0.0, 1.0);
            channel.resize(received.rows(), sources);
            for (int r = 0; r < channel.rows(); ++r)
                for (int c = 0; c < channel.cols(); ++c)
                    channel(r, c) = detail::complex_gaussian(rng, gauss, 1.0);
        }

        DetectionResult current;
        current.converged = false;
        CMatrix symbols;
        bool have_symbols = false;
        for (int it = 0; it < opts.max_iterations; ++it) {
            CMatrix soft = detail::pseudo_inverse_apply(channel, received);
            CMatrix quantized =
                soft.unaryExpr([&](Complex z) { return alphabet.quantize(z); });
            if (have_symbols && quantized == symbols) {
                current.converged = true;
                break;
            }
            symbols = quantized;
            have_symbols = true;
            IlspIteration step;
            step.before_channel_update = detail::squared_misfit(received, channel, symbols);
            channel = detail::channel_from_symbols(received, symbols);
            step.after_channel_update = detail::squared_misfit(received, channel, symbols);
            current.iterations.push_back(step);
        }
        current.symbols = symbols;
        current.channel = channel;
        current.residual = detail::squared_misfit(received, channel, symbols);
        if (current.residual < best.residual) best = current;
    }

    best.symbols = canonicalize(best.symbols, alphabet);
    best.channel = detail::channel_from_symbols(received, best.symbols);
    best.residual = detail::squared_misfit(received, *best.channel, best.symbols);
    return best;
}

struct Alignment {
    CMatrix symbols;       // estimate mapped onto the truth's row order and scaling
    int symbol_errors = 0;
};

// Resolve the blind-detection ambiguity against a known truth: search row
// permutations crossed with per-row symmetry scalars for the minimum
// Hamming distance.
inline Alignment align_ambiguity(const CMatrix& estimate, const CMatrix& truth,
                                 const Alphabet& alphabet) {
    if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
        throw std::invalid_argument("alignment requires matching shapes");
    }
    const int k = static_cast<int>(estimate.rows());
    const int n = static_cast<int>(estimate.cols());
    if (k > 8) throw std::invalid_argument("alignment supports at most 8 rows");
    const auto scalars = alphabet.symmetry_scalars();

    // Best per-pair distance and scalar: estimate row j against truth row i.
    std::vector<std::vector<int>> dist(k, std::vector<int>(k));
    std::vector<std::vector<Complex>> scale(k, std::vector<Complex>(k));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            int best_d = n + 1;
            Complex best_s = scalars.front();
            for (const Complex& s : scalars) {
                int d = 0;
                for (int c = 0; c < n; ++c) d += std::abs(s * estimate(j, c) - truth(i, c)) > 1e-9;
                if (d < best_d) {
                    best_d = d;
                    best_s = s;
                }
            }
            dist[i][j] = best_d;
            scale[i][j] = best_s;
        }
    }

    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best_perm = perm;
    int best_total = std::numeric_limits<int>::max();
    do {
        int total = 0;
        for (int i = 0; i < k; ++i) total += dist[i][perm[static_cast<std::size_t>(i)]];
        if (total < best_total) {
            best_total = total;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    Alignment out;
    out.symbols.resize(k, n);
    for (int i = 0; i < k; ++i) {
        const int j = best_perm[static_cast<std::size_t>(i)];
        out.symbols.row(i) = (scale[i][j] * estimate.row(j))
                                 .unaryExpr([&](Complex z) { return alphabet.quantize(z); });
    }
    out.symbol_errors = best_total;
    return out;
}

}  // namespace mpr::phy
