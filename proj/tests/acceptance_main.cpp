// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Each criterion pins its tolerances in code; the grids and tolerances are
// not adjusted to the implementation. Where a stated claim is numerically
// unattainable the criterion is still run as stated and reported honestly,
// with the measured values printed for review.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mpr/backoff.hpp"
#include "mpr/ieee80211g.hpp"
#include "mpr/phy.hpp"
#include "mpr/scenario.hpp"
#include "mpr/sim.hpp"
#include "mpr/throughput.hpp"

using namespace mpr;

namespace {

const SlotDurations kUnitSlots{1.0, 1.0, 1.0};
int g_failures = 0;

void criterion(int id, const std::string& label, const std::function<bool(std::string&)>& fn) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
        ok = fn(note);
    } catch (const std::exception& e) {
        ok = false;
        note += std::string("exception: ") + e.what() + "\n";
    }
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, label.c_str(), sec);
    std::stringstream ss(note);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty()) std::printf("        %s\n", line.c_str());
    }
    if (!ok) ++g_failures;
    std::fflush(stdout);
}

bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }
bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

// --- criterion bodies -------------------------------------------------------

bool classical_optimum(std::string& note) {
    const OptimalRate opt = optimal_attempt_rate(1, kUnitSlots, 1.0);
    note = fmt("lambda* = %.9f, S*/R = %.9f (target 1, 1/e)", opt.rate, opt.throughput);
    return close_abs(opt.throughput, std::exp(-1.0), 1e-6) && close_abs(opt.rate, 1.0, 1e-6);
}

bool golden_ratio_optimum(std::string& note) {
    const OptimalRate opt = optimal_attempt_rate(2, kUnitSlots, 1.0);
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    note = fmt("lambda* = %.9f (target %.9f)", opt.rate, golden);
    return close_abs(opt.rate, golden, 1e-6);
}

bool super_linearity(std::string& note) {
    bool ok = true;
    double prev = 0.0;
    for (int m = 1; m <= 20; ++m) {
        const double per = optimal_attempt_rate(m, kUnitSlots, 1.0).throughput / m;
        if (per < prev) {
            ok = false;
            note += fmt("asymptotic S*/M decreased at M=%d\n", m);
        }
        prev = per;
    }
    prev = 0.0;
    for (int m = 1; m <= 10; ++m) {
        const NetworkParams net{50, m, 1.0, 1.0};
        const OptimalPt opt = optimal_pt_finite(net, kUnitSlots);
        const double per = opt.throughput / m;
        if (per < prev) {
            ok = false;
            note += fmt("finite-N S*/M decreased at M=%d\n", m);
        }
        prev = per;

        // Grid-search oracle at step 1e-5 must agree with the optimizer.
        double grid = 0.0;
        for (double p = 1e-5; p < 1.0; p += 1e-5) {
            grid = std::max(grid, throughput_finite(net, p, kUnitSlots));
        }
        if (!close_rel(grid, opt.throughput, 1e-4)) {
            ok = false;
            note += fmt("grid oracle disagrees at M=%d: %.8f vs %.8f\n", m, grid, opt.throughput);
        }
    }
    return ok;
}

bool efficiency_trends(std::string& note) {
    std::vector<OptimalRate> opt(31);
    for (int m = 1; m <= 30; ++m) opt[m] = optimal_attempt_rate(m, kUnitSlots, 1.0);

    bool ok = true;
    for (int m = 2; m <= 30; ++m) {
        if (!(opt[m].throughput / m > opt[m - 1].throughput / (m - 1))) {
            ok = false;
            note += fmt("S*/(MR) not strictly increasing at M=%d\n", m);
        }
    }
    // lambda*(1) = 1 is the boundary case of the strict bound.
    if (!close_abs(opt[1].rate, 1.0, 1e-6)) {
        ok = false;
        note += fmt("lambda*(1) = %.9f != 1\n", opt[1].rate);
    }
    for (int m = 2; m <= 30; ++m) {
        if (!(opt[m].rate < m)) {
            ok = false;
            note += fmt("lambda*(%d) = %.6f not below M\n", m, opt[m].rate);
        }
    }
    // The rate/capability ratio dips below its M=1 value before recovering
    // toward 1; the monotone increase is a tail property, checked from M=10.
    for (int m = 10; m < 30; ++m) {
        if (!(opt[m + 1].rate / (m + 1) > opt[m].rate / m)) {
            ok = false;
            note += fmt("lambda*/M not increasing at M=%d\n", m + 1);
        }
    }
    note += fmt("lambda*/M: M=1 %.4f, M=2 %.4f, M=7 %.4f (dip), M=10 %.4f, M=30 %.4f -> 1",
                opt[1].rate, opt[2].rate / 2, opt[7].rate / 7, opt[10].rate / 10,
                opt[30].rate / 30);
    return ok;
}

bool offered_load_ratios(std::string& note) {
    const int m = 200;
    auto ratio = [&](double lam) {
        return throughput_asymptotic(m, lam, kUnitSlots, 1.0) / lam;
    };
    const double low = ratio(0.8 * m), high = ratio(1.2 * m), knee = ratio(1.0 * m);
    note = fmt("S/(lambda R) at 0.8M/1.0M/1.2M = %.4f / %.4f / %.6f", low, knee, high);
    return low > 0.99 && high < 0.01 && knee >= 0.45 && knee <= 0.55;
}

bool attempt_rate_closed_form(std::string& note) {
    bool ok = true;
    const double ln2 = asymptotic_attempt_rate(1, 2.0);
    if (!close_abs(ln2, std::log(2.0), 1e-9)) {
        ok = false;
        note += fmt("lambda(1,2) = %.12f vs ln 2\n", ln2);
    }
    double worst = 0.0;
    for (int m = 1; m <= 10; ++m) {
        for (double r : {1.5, 2.0, 4.0, 8.0}) {
            const double lam = asymptotic_attempt_rate(m, r);
            const double s = throughput_asymptotic(m, lam, kUnitSlots, 1.0);
            const double gap = std::abs(s / lam - (1.0 - 1.0 / r));
            worst = std::max(worst, gap);
            if (gap > 1e-9) {
                ok = false;
                note += fmt("identity off at M=%d r=%.1f: %.2e\n", m, r, gap);
            }
        }
    }
    note += fmt("worst identity residual %.2e", worst);
    return ok;
}

bool fixed_point_vs_simulator(std::string& note) {
    const Ieee80211g table = default_table1();
    struct Row {
        AccessMode mode;
        int m, w0;
        FixedPoint fp;
        double thr_analytic;
    };
    std::vector<Row> rows;
    std::vector<sim::SimConfig> configs;
    for (AccessMode mode :
         {AccessMode::NonCarrierSensing, AccessMode::BasicAccess, AccessMode::RtsCts}) {
        for (int m : {1, 2, 4}) {
            for (int w0 : {16, 32}) {
                Row row;
                row.mode = mode;
                row.m = m;
                row.w0 = w0;
                row.fp = solve_fixed_point(50, m, {2.0, w0});
                const NetworkParams net = table.net(50, m);
                const SlotDurations dur =
                    mode == AccessMode::NonCarrierSensing
                        ? equal_slot_durations(table.payload_bits, table.data_rate)
                        : slot_durations(mode, net, table.timing());
                row.thr_analytic = throughput_finite(net, row.fp.p_transmit, dur);
                rows.push_back(row);

                sim::SimConfig cfg;
                cfg.net = net;
                cfg.backoff = {2.0, w0};
                cfg.mode = mode;
                cfg.timing = table.timing();
                cfg.warmup_slots = 100000;
                cfg.measure_slots = 1000000;
                cfg.seed = sim::derive_seed(20260810, configs.size());
                configs.push_back(cfg);
            }
        }
    }
    const auto stats = sim::sweep(configs, scenario::thread_cap());

    bool ok = true;
    int passed = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& row = rows[i];
        const double dp = std::abs(stats[i].pt_hat - row.fp.p_transmit) / row.fp.p_transmit;
        const double dc = std::abs(stats[i].pc_hat - row.fp.p_collision) / row.fp.p_collision;
        const double dt = std::abs(stats[i].throughput - row.thr_analytic) / row.thr_analytic;
        const bool row_ok = dp <= 0.03 && dc <= 0.03 && dt <= 0.03;
        passed += row_ok;
        if (!row_ok) {
            ok = false;
            note += fmt("%6s M=%d W0=%2d: pt %+5.1f%%, pc %+5.1f%%, thr %+5.1f%%\n",
                        to_string(row.mode).c_str(), row.m, row.w0, 100 * dp, 100 * dc, 100 * dt);
        }
    }
    note += fmt("%d/%zu combos within 3%%.", passed, rows.size());
    if (!ok) {
        note +=
            " Failures are the M=1 rows: with r*p_c near 0.94 the infinite\n"
            "backoff chain develops heavy-tailed window sojourns and mixes far too slowly\n"
            "for a 1e6-slot window to reach its stationary average (verified on an isolated\n"
            "chain driven by an i.i.d. collision process at the analytic p_c; the bias\n"
            "persists at any feasible warmup). The discrepancy is a property of the model\n"
            "at these parameters, not of the solver or the simulator.";
    }
    return ok;
}

bool beb_efficiency_bands(std::string& note) {
    const double aloha10 = beb_efficiency(10, kUnitSlots, 1.0);
    bool ok = aloha10 >= 0.75 && aloha10 <= 0.85;
    note = fmt("non-carrier-sensing M=10 ratio = %.4f (band [0.75, 0.85])\n", aloha10);

    const Ieee80211g table = default_table1();
    const SlotDurations dur =
        slot_durations(AccessMode::RtsCts, table.net(50, 1), table.timing());
    double worst = 1.0;
    for (int m = 1; m <= 10; ++m) {
        const double eff = beb_efficiency(m, dur, table.payload_bits);
        worst = std::min(worst, eff);
        if (eff < 0.9) {
            ok = false;
            note += fmt("rts/cts ratio below 0.9 at M=%d: %.4f\n", m, eff);
        }
    }
    note += fmt("rts/cts worst ratio over M=1..10: %.4f (floor 0.9)", worst);
    return ok;
}

bool optimal_factor_growth(std::string& note) {
    const Ieee80211g table = default_table1();
    bool ok = true;
    for (AccessMode mode : {AccessMode::NonCarrierSensing, AccessMode::BasicAccess}) {
        const SlotDurations dur =
            mode == AccessMode::NonCarrierSensing
                ? kUnitSlots
                : slot_durations(mode, table.net(50, 1), table.timing());
        const double payload = mode == AccessMode::NonCarrierSensing ? 1.0 : table.payload_bits;
        double prev = 0.0, r10 = 0.0;
        for (int m = 3; m <= 15; ++m) {
            const double r_star = optimal_backoff_factor(m, dur, payload).factor;
            if (m == 10) r10 = r_star;
            if (r_star < prev - 1e-6) {
                ok = false;
                note += fmt("%s: r*(%d) = %.4f below r*(%d) = %.4f\n", to_string(mode).c_str(), m,
                            r_star, m - 1, prev);
            }
            prev = r_star;
        }
        note += fmt("%s: r*(10) = %.4f\n", to_string(mode).c_str(), r10);
        if (!(r10 > 2.0)) ok = false;
    }
    if (!ok) {
        note +=
            "Basic access dips once at M=3->4 (verified by a fine grid over r as well);\n"
            "the growth with M is clean from M=4 on and throughout for non-carrier-sensing.";
    }
    return ok;
}

bool simo_contrast(std::string& note) {
    bool ok = true;
    const double R = 54e6;
    for (int m = 1; m <= 8; ++m) {
        const double expected = (R + std::log2(static_cast<double>(m))) * std::exp(-1.0);
        if (!close_rel(simo_asymptotic_optimum(R, m), expected, 1e-12)) {
            ok = false;
            note += fmt("closed form mismatch at M=%d\n", m);
        }
    }
    double prev_simo = 1e18, prev_mpr = 0.0;
    for (int m = 1; m <= 8; ++m) {
        const double simo = simo_asymptotic_optimum(R, m) / m;
        const double mpr = optimal_attempt_rate(m, kUnitSlots, 1.0).throughput / m;
        if (!(simo < prev_simo)) {
            ok = false;
            note += fmt("normalized baseline not decreasing at M=%d\n", m);
        }
        if (!(mpr > prev_mpr)) {
            ok = false;
            note += fmt("normalized multipacket curve not increasing at M=%d\n", m);
        }
        prev_simo = simo;
        prev_mpr = mpr;
    }
    note += "baseline (R + log2 M)/e reproduced; normalized curves move in opposite directions";
    return ok;
}

bool error_robust_super_linearity(std::string& note) {
    bool ok = true;
    for (double eps : {0.01, 0.1}) {
        const SuccessModel model = SuccessModel::with_error_rate(eps);
        double prev = 0.0;
        for (int m = 1; m <= 15; ++m) {
            const double per = optimal_attempt_rate(m, kUnitSlots, 1.0, model).throughput / m;
            if (per < prev) {
                ok = false;
                note += fmt("eps=%.2f: S*/M decreased at M=%d\n", eps, m);
            }
            prev = per;
        }
    }
    note += "super-linearity holds under flat success-rate degradation";
    return ok;
}

bool phy_suite(std::string& note) {
    using namespace mpr::phy;
    const double inf = std::numeric_limits<double>::infinity();
    bool ok = true;

    // (a) noiseless source counting.
    for (int m_ant = 2; m_ant <= 8; ++m_ant) {
        for (int k = 1; k < m_ant; ++k) {
            const SignalBlock b = synthesize(m_ant, k, 64, Alphabet::bpsk(), inf,
                                             static_cast<std::uint64_t>(7000 + 10 * m_ant + k));
            if (estimate_source_count(b.received) != k) {
                ok = false;
                note += fmt("source count wrong at M_ant=%d K=%d\n", m_ant, k);
            }
        }
    }

    // (b) linear detectors at 30 dB.
    long zf_err = 0, mmse_err = 0;
    const long total = 50L * 2 * 200;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const SignalBlock b = synthesize(4, 2, 200, Alphabet::bpsk(), 30.0, 8000 + seed);
        const CMatrix zf = zf_detect(b).symbols;
        const CMatrix mmse = mmse_detect(b).symbols;
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 200; ++c) {
                zf_err += std::abs(zf(r, c) - b.symbols(r, c)) > 1e-9;
                mmse_err += std::abs(mmse(r, c) - b.symbols(r, c)) > 1e-9;
            }
        }
    }
    const double zf_ser = static_cast<double>(zf_err) / total;
    const double mmse_ser = static_cast<double>(mmse_err) / total;
    note += fmt("zf ser %.5f, mmse ser %.5f (cap 0.01)\n", zf_ser, mmse_ser);
    if (zf_ser > 0.01 || mmse_ser > 0.01) ok = false;

    // (c) exhaustive blind detection on noiseless blocks, exact up to the
    // permutation/sign ambiguity. Rank-deficient symbol draws are outside
    // the search space and skipped.
    for (auto [k, n_sym] : std::vector<std::pair<int, int>>{{1, 3}, {1, 8}, {2, 4}, {2, 8}}) {
        int tested = 0;
        for (std::uint64_t seed = 0; tested < 10 && seed < 200; ++seed) {
            const SignalBlock b =
                synthesize(4, k, n_sym, Alphabet::bpsk(), inf, 9000 + 100 * k + n_sym + seed);
            Eigen::FullPivLU<CMatrix> lu(b.symbols);
            if (lu.rank() < k) continue;
            ++tested;
            const DetectionResult r = blind_detect_exhaustive(b.received, k, b.alphabet);
            if (r.residual > 1e-12 ||
                align_ambiguity(r.symbols, b.symbols, b.alphabet).symbol_errors != 0) {
                ok = false;
                note += fmt("exhaustive recovery failed: K=%d N_sym=%d seed=%llu residual=%.2e\n",
                            k, n_sym, (unsigned long long)(9000 + 100 * k + n_sym + seed),
                            r.residual);
            }
        }
        if (tested < 10) {
            ok = false;
            note += fmt("not enough full-rank instances at K=%d N_sym=%d\n", k, n_sym);
        }
    }

    // (d) 100 paired iterative-vs-exhaustive instances at 25 dB, with the
    // per-iteration channel-update monotonicity assertion.
    int within = 0;
    bool monotone = true;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SignalBlock b = synthesize(4, 2, 8, Alphabet::bpsk(), 25.0, 50000 + seed);
        const DetectionResult ex = blind_detect_exhaustive(b.received, 2, b.alphabet);
        IlspOptions opts;
        opts.seed = seed;
        opts.restarts = 16;
        const DetectionResult it = blind_detect_ilsp(b.received, 2, b.alphabet, opts);
        within += it.residual <= 1.05 * ex.residual + 1e-12;
        for (const IlspIteration& step : it.iterations) {
            monotone = monotone && step.after_channel_update <= step.before_channel_update + 1e-9;
        }
    }
    note += fmt("ilsp within 5%% of the enumeration optimum on %d/100 instances", within);
    if (within < 100 || !monotone) ok = false;
    if (!monotone) note += "\nchannel update increased the objective";
    return ok;
}

bool csv_determinism(std::string& note) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "mprlab_acceptance";
    fs::create_directories(dir);

    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    const std::vector<std::pair<std::string, scenario::ParamMap>> cases = {
        {"scaling", {{"m_max", "4"}}},
        {"fixed-point",
         {{"n", "10"}, {"m", "2"}, {"w0", "16"}, {"warmup_slots", "1000"},
          {"measure_slots", "20000"}, {"seed", "5"}}},
        {"optimal-r", {{"m_max", "3"}}},
        {"beb-efficiency", {{"m_max", "3"}, {"mode", "basic"}}},
        {"simulate",
         {{"n", "10"}, {"m", "2"}, {"w0", "16"}, {"warmup_slots", "1000"},
          {"measure_slots", "20000"}, {"seed", "5"}}},
        {"simo-compare", {{"m_max", "4"}}},
        {"phy-demo",
         {{"detector", "zf,ilsp"}, {"k", "2"}, {"m_ant", "4"}, {"snr_db", "20"},
          {"n_sym", "8"}, {"trials", "5"}, {"seed", "3"}}},
    };
    bool ok = true;
    for (const auto& [kind, params] : cases) {
        scenario::Scenario a{kind, params, (dir / (kind + "_a.csv")).string()};
        scenario::Scenario b{kind, params, (dir / (kind + "_b.csv")).string()};
        scenario::run_scenario(a);
        scenario::run_scenario(b);
        if (slurp(a.output_path) != slurp(b.output_path)) {
            ok = false;
            note += fmt("%s re-run differs\n", kind.c_str());
        }
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    note += fmt("%zu scenario kinds re-run byte-identically", cases.size());
    return ok;
}

}  // namespace

int main() {
    criterion(1, "classical single-packet optimum (lambda* = 1, S*/R = 1/e)", classical_optimum);
    criterion(2, "golden-ratio attempt rate at capability 2", golden_ratio_optimum);
    criterion(3, "super-linear scaling, asymptotic and finite population", super_linearity);
    criterion(4, "efficiency and attempt-rate trends to capability 30", efficiency_trends);
    criterion(5, "offered-load ratio bands at capability 200", offered_load_ratios);
    criterion(6, "backoff attempt-rate closed form and throughput identity",
              attempt_rate_closed_form);
    criterion(7, "fixed point versus simulator, 18 combos within 3%", fixed_point_vs_simulator);
    criterion(8, "binary-backoff efficiency bands", beb_efficiency_bands);
    criterion(9, "optimal backoff factor growth over capability 3..15", optimal_factor_growth);
    criterion(10, "rate-boosted single-packet baseline contrast", simo_contrast);
    criterion(11, "super-linearity under residual channel errors", error_robust_super_linearity);
    criterion(12, "multiuser detection suite", phy_suite);
    criterion(13, "byte-identical scenario re-runs", csv_determinism);

    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", g_failures);
    }
    return g_failures;
}
