#pragma once

// Scenario runner behind the command-line tool: parses flat key/value
// config files, validates every parameter against the target module's
// preconditions before any computation starts, fans out simulator batches,
// and emits CSV datasets with fixed per-kind headers.
//
// Config grammar (one construct per line):
//   [section]        scenario kind the following keys apply to
//   key = value      setting; values are numbers, names, "inf", comma
//                    lists (1,2,4) or inclusive ranges (1..10)
//   # comment        ignored, as are blank lines
// Keys before the first section header apply to every kind.
//
// Every CSV starts with a comment line recording the fully resolved
// configuration (defaults included) and the seed, so a file can be
// regenerated bit-for-bit from its own header. Throughputs are printed
// with 6 significant digits, probabilities and ratios with 8 decimal
// places, attempt rates and backoff factors with 8 significant digits.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mpr/backoff.hpp"
#include "mpr/ieee80211g.hpp"
#include "mpr/phy.hpp"
#include "mpr/sim.hpp"
#include "mpr/throughput.hpp"

namespace mpr::scenario {

using ParamMap = std::map<std::string, std::string>;

struct Scenario {
    std::string kind;
    ParamMap params;
    std::string output_path;
};

inline const std::vector<std::string>& scenario_kinds() {
    static const std::vector<std::string> kinds = {
        "scaling", "fixed-point", "optimal-r", "beb-efficiency",
        "simulate", "simo-compare", "phy-demo"};
    return kinds;
}

// ---------------------------------------------------------------------------
// formatting

inline std::string fmt_throughput(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string fmt_prob(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8f", v);
    return buf;
}

inline std::string fmt_rate(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// config file

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace detail

// Sections keyed by name; keys before any section land under "".
inline std::map<std::string, ParamMap> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    std::map<std::string, ParamMap> sections;
    std::string line;
    std::string current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                            ": unterminated section header");
            }
            current = detail::trim(t.substr(1, t.size() - 2));
            sections[current];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        }
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
        }
        sections[current][key] = value;
    }
    return sections;
}

// ---------------------------------------------------------------------------
// parameter access with defaults, consumption tracking and resolved echo

class ParamReader {
public:
    explicit ParamReader(const ParamMap& params) : params_(params) {}

    std::string get_string(const std::string& key, const std::string& fallback) {
        const auto it = params_.find(key);
        const std::string v = it == params_.end() ? fallback : it->second;
        consume(key, v);
        return v;
    }

    bool get_bool(const std::string& key, bool fallback) {
        const std::string v = get_string(key, fallback ? "true" : "false");
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw std::invalid_argument("parameter " + key + " must be true or false (got \"" + v + "\")");
    }

    double get_double(const std::string& key, double fallback) {
        const auto it = params_.find(key);
        if (it == params_.end()) {
            consume(key, fmt_rate(fallback));
            return fallback;
        }
        consume(key, it->second);
        return parse_double(key, it->second);
    }

    int get_int(const std::string& key, int fallback) {
        const auto it = params_.find(key);
        if (it == params_.end()) {
            consume(key, std::to_string(fallback));
            return fallback;
        }
        consume(key, it->second);
        return parse_int(key, it->second);
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        const auto it = params_.find(key);
        if (it == params_.end()) {
            consume(key, std::to_string(fallback));
            return fallback;
        }
        consume(key, it->second);
        try {
            return std::stoull(it->second);
        } catch (...) {
            throw std::invalid_argument("parameter " + key + " must be a non-negative integer");
        }
    }

    std::optional<int> get_optional_int(const std::string& key) {
        const auto it = params_.find(key);
        if (it == params_.end() || it->second.empty()) return std::nullopt;
        consume(key, it->second);
        return parse_int(key, it->second);
    }

    // "4", "1,2,4" or "1..10".
    std::vector<int> get_int_list(const std::string& key, const std::string& fallback) {
        const std::string v = get_string(key, fallback);
        std::vector<int> out;
        const auto dots = v.find("..");
        if (dots != std::string::npos) {
            const int lo = parse_int(key, detail::trim(v.substr(0, dots)));
            const int hi = parse_int(key, detail::trim(v.substr(dots + 2)));
            if (hi < lo) throw std::invalid_argument("parameter " + key + ": empty range " + v);
            for (int x = lo; x <= hi; ++x) out.push_back(x);
            return out;
        }
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_int(key, detail::trim(item)));
        if (out.empty()) throw std::invalid_argument("parameter " + key + ": empty list");
        return out;
    }

    std::vector<double> get_double_list(const std::string& key, const std::string& fallback) {
        const std::string v = get_string(key, fallback);
        std::vector<double> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_double(key, detail::trim(item)));
        if (out.empty()) throw std::invalid_argument("parameter " + key + ": empty list");
        return out;
    }

    std::vector<std::string> get_string_list(const std::string& key, const std::string& fallback) {
        const std::string v = get_string(key, fallback);
        std::vector<std::string> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(detail::trim(item));
        if (out.empty()) throw std::invalid_argument("parameter " + key + ": empty list");
        return out;
    }

    // Rejects config keys nothing consumed: almost always a typo.
    void reject_unknown(const std::string& kind) const {
        for (const auto& [key, value] : params_) {
            if (!consumed_.count(key)) {
                throw std::invalid_argument("unknown parameter \"" + key + "\" for scenario kind " +
                                            kind);
            }
        }
    }

    // One sorted key=value line echoing everything the run actually used.
    std::string resolved_line(const std::string& kind) const {
        std::string out = "# kind=" + kind;
        for (const auto& [key, value] : resolved_) out += " " + key + "=" + value;
        return out;
    }

private:
    static double parse_double(const std::string& key, const std::string& v) {
        if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (...) {
            throw std::invalid_argument("parameter " + key + " must be a number (got \"" + v + "\")");
        }
    }

    static int parse_int(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const int i = std::stoi(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return i;
        } catch (...) {
            throw std::invalid_argument("parameter " + key + " must be an integer (got \"" + v + "\")");
        }
    }

    void consume(const std::string& key, const std::string& value) {
        consumed_.insert(key);
        resolved_[key] = value;
    }

    const ParamMap& params_;
    std::set<std::string> consumed_;
    std::map<std::string, std::string> resolved_;
};

// ---------------------------------------------------------------------------
// shared pieces

inline unsigned thread_cap() {
    const char* env = std::getenv("MPRLAB_THREADS");
    if (!env) return 0;  // hardware concurrency
    const long v = std::strtol(env, nullptr, 10);
    return v > 0 ? static_cast<unsigned>(v) : 0;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << body;
    if (!out) throw std::runtime_error("write failed: " + path);
}

// 802.11g defaults with the overrides every kind accepts.
inline Ieee80211g table_from(ParamReader& reader) {
    Ieee80211g table = default_table1();
    table.data_rate = reader.get_double("data_rate", table.data_rate);
    table.basic_rate = reader.get_double("basic_rate", table.basic_rate);
    table.payload_bits = reader.get_double("payload_bits", table.payload_bits);
    table.propagation_delay = reader.get_double("delta", table.propagation_delay);
    table.mpr_frames = reader.get_bool("mpr_frames", false);
    if (!(table.data_rate > 0.0)) throw std::invalid_argument("data rate violates precondition R > 0");
    if (!(table.basic_rate > 0.0)) throw std::invalid_argument("basic rate violates precondition > 0");
    if (!(table.payload_bits > 0.0)) throw std::invalid_argument("payload violates precondition L > 0");
    return table;
}

inline SlotDurations durations_for(AccessMode mode, const Ieee80211g& table, int capability) {
    if (mode == AccessMode::NonCarrierSensing) {
        return equal_slot_durations(table.payload_bits, table.data_rate);
    }
    return slot_durations(mode, table.net(2, capability), table.timing(capability));
}

inline SuccessModel success_from(ParamReader& reader) {
    const double eps = reader.get_double("success_eps", 0.0);
    return SuccessModel::with_error_rate(eps);
}

inline phy::Alphabet alphabet_from(ParamReader& reader) {
    const std::string name = reader.get_string("alphabet", "bpsk");
    if (name == "bpsk") return phy::Alphabet::bpsk();
    if (name == "qpsk") return phy::Alphabet::qpsk();
    throw std::invalid_argument("alphabet must be bpsk or qpsk (got \"" + name + "\")");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// scenario kinds

inline std::string run_scaling(ParamReader& reader) {
    const AccessMode mode = access_mode_from_string(reader.get_string("mode", "aloha"));
    const int m_min = reader.get_int("m_min", 1);
    const int m_max = reader.get_int("m_max", 10);
    const std::optional<int> finite_n = reader.get_optional_int("finite_n");
    const Ieee80211g table = detail::table_from(reader);
    const SuccessModel success = detail::success_from(reader);
    reader.get_u64("seed", 1);  // unused, echoed for uniform headers

    if (m_min < 1) throw std::invalid_argument("capability violates precondition M >= 1");
    if (m_max < m_min) throw std::invalid_argument("capability range violates precondition m_max >= m_min");
    if (finite_n && m_max > *finite_n) {
        throw std::invalid_argument("capability range violates precondition M_max <= N");
    }

    std::string body = "M,lambda_star,S_star_bps,S_per_M_norm\n";
    for (int m = m_min; m <= m_max; ++m) {
        const SlotDurations dur = detail::durations_for(mode, table, m);
        double rate = 0.0, s_star = 0.0;
        if (finite_n) {
            const OptimalPt opt = optimal_pt_finite(table.net(*finite_n, m), dur, success);
            rate = opt.p_transmit * *finite_n;
            s_star = opt.throughput;
        } else {
            const OptimalRate opt = optimal_attempt_rate(m, dur, table.payload_bits, success);
            rate = opt.rate;
            s_star = opt.throughput;
        }
        body += std::to_string(m) + "," + fmt_rate(rate) + "," + fmt_throughput(s_star) + "," +
                fmt_prob(s_star / (m * table.data_rate)) + "\n";
    }
    return body;
}

inline std::string run_fixed_point(ParamReader& reader) {
    const AccessMode mode = access_mode_from_string(reader.get_string("mode", "aloha"));
    const std::vector<int> n_list = reader.get_int_list("n", "50");
    const std::vector<int> m_list = reader.get_int_list("m", "1");
    const double factor = reader.get_double("r", 2.0);
    const std::vector<int> w0_list = reader.get_int_list("w0", "16");
    const std::uint64_t warmup = reader.get_u64("warmup_slots", 100000);
    const std::uint64_t measure = reader.get_u64("measure_slots", 1000000);
    const std::uint64_t seed = reader.get_u64("seed", 1);
    const Ieee80211g table = detail::table_from(reader);
    const SuccessModel success = detail::success_from(reader);

    std::vector<sim::SimConfig> configs;
    std::vector<FixedPoint> fps;
    std::vector<double> thr_analytic;
    for (int n : n_list) {
        for (int m : m_list) {
            for (int w0 : w0_list) {
                const BackoffParams b{factor, w0};
                b.validate();
                const FixedPoint fp = solve_fixed_point(n, m, b);
                const NetworkParams net = table.net(n, m);
                const SlotDurations dur = detail::durations_for(mode, table, m);
                fps.push_back(fp);
                thr_analytic.push_back(throughput_finite(net, fp.p_transmit, dur, success));

                sim::SimConfig cfg;
                cfg.net = net;
                cfg.backoff = b;
                cfg.mode = mode;
                cfg.timing = table.timing(m);
                cfg.warmup_slots = warmup;
                cfg.measure_slots = measure;
                cfg.seed = sim::derive_seed(seed, configs.size());
                cfg.success = success;
                configs.push_back(cfg);
            }
        }
    }
    const std::vector<sim::SimStats> stats = sim::sweep(configs, thread_cap());

    std::string body = "N,M,r,W0,pt_analytic,pc_analytic,pt_sim,pc_sim,thr_analytic_bps,thr_sim_bps\n";
    for (std::size_t i = 0; i < configs.size(); ++i) {
        body += std::to_string(configs[i].net.stations) + "," +
                std::to_string(configs[i].net.capability) + "," + fmt_rate(factor) + "," +
                std::to_string(configs[i].backoff.min_window) + "," +
                fmt_prob(fps[i].p_transmit) + "," + fmt_prob(fps[i].p_collision) + "," +
                fmt_prob(stats[i].pt_hat) + "," + fmt_prob(stats[i].pc_hat) + "," +
                fmt_throughput(thr_analytic[i]) + "," + fmt_throughput(stats[i].throughput) + "\n";
    }
    return body;
}

inline std::string run_optimal_r(ParamReader& reader) {
    const std::vector<std::string> modes = reader.get_string_list("mode", "aloha");
    const int m_min = reader.get_int("m_min", 1);
    const int m_max = reader.get_int("m_max", 10);
    const double r_max = reader.get_double("r_max", 64.0);
    const Ieee80211g table = detail::table_from(reader);
    reader.get_u64("seed", 1);

    if (m_min < 1) throw std::invalid_argument("capability violates precondition M >= 1");
    if (m_max < m_min) throw std::invalid_argument("capability range violates precondition m_max >= m_min");
    if (!(r_max > 2.0)) throw std::invalid_argument("search bound violates precondition r_max > 2");

    std::string body = "M,mode,r_star,S_star_bps,S_beb_bps,beb_ratio\n";
    for (const std::string& mode_name : modes) {
        const AccessMode mode = access_mode_from_string(mode_name);
        for (int m = m_min; m <= m_max; ++m) {
            const SlotDurations dur = detail::durations_for(mode, table, m);
            const OptimalBackoff opt = optimal_backoff_factor(m, dur, table.payload_bits, r_max);
            const double beb = asymptotic_throughput_of_r(m, 2.0, dur, table.payload_bits);
            body += std::to_string(m) + "," + to_string(mode) + "," + fmt_rate(opt.factor) + "," +
                    fmt_throughput(opt.throughput) + "," + fmt_throughput(beb) + "," +
                    fmt_prob(std::min(beb / opt.throughput, 1.0)) + "\n";
        }
    }
    return body;
}

inline std::string run_simulate(ParamReader& reader) {
    const AccessMode mode = access_mode_from_string(reader.get_string("mode", "aloha"));
    const std::vector<int> n_list = reader.get_int_list("n", "50");
    const std::vector<int> m_list = reader.get_int_list("m", "1");
    const double factor = reader.get_double("r", 2.0);
    const std::vector<int> w0_list = reader.get_int_list("w0", "16");
    const std::uint64_t warmup = reader.get_u64("warmup_slots", 100000);
    const std::uint64_t measure = reader.get_u64("measure_slots", 1000000);
    const std::uint64_t seed = reader.get_u64("seed", 1);
    const Ieee80211g table = detail::table_from(reader);
    const SuccessModel success = detail::success_from(reader);

    std::vector<sim::SimConfig> configs;
    for (int n : n_list) {
        for (int m : m_list) {
            for (int w0 : w0_list) {
                sim::SimConfig cfg;
                cfg.net = table.net(n, m);
                cfg.backoff = {factor, w0};
                cfg.mode = mode;
                cfg.timing = table.timing(m);
                cfg.warmup_slots = warmup;
                cfg.measure_slots = measure;
                cfg.seed = sim::derive_seed(seed, configs.size());
                cfg.success = success;
                cfg.validate();
                configs.push_back(cfg);
            }
        }
    }
    const std::vector<sim::SimStats> stats = sim::sweep(configs, thread_cap());

    std::string body = "N,M,r,W0,mode,seed,pt_hat,pc_hat,thr_sim_bps,slots_idle,slots_succ,slots_coll\n";
    for (std::size_t i = 0; i < configs.size(); ++i) {
        body += std::to_string(configs[i].net.stations) + "," +
                std::to_string(configs[i].net.capability) + "," + fmt_rate(factor) + "," +
                std::to_string(configs[i].backoff.min_window) + "," + to_string(mode) + "," +
                std::to_string(configs[i].seed) + "," + fmt_prob(stats[i].pt_hat) + "," +
                fmt_prob(stats[i].pc_hat) + "," + fmt_throughput(stats[i].throughput) + "," +
                std::to_string(stats[i].idle_slots) + "," + std::to_string(stats[i].success_slots) +
                "," + std::to_string(stats[i].collision_slots) + "\n";
    }
    return body;
}

inline std::string run_simo_compare(ParamReader& reader) {
    const int m_min = reader.get_int("m_min", 1);
    const int m_max = reader.get_int("m_max", 8);
    const double log_base = reader.get_double("log_base", 2.0);
    const Ieee80211g table = detail::table_from(reader);
    reader.get_u64("seed", 1);

    if (m_min < 1) throw std::invalid_argument("antenna count violates precondition M >= 1");
    if (m_max < m_min) throw std::invalid_argument("antenna range violates precondition m_max >= m_min");
    if (!(log_base > 1.0)) throw std::invalid_argument("logarithm base violates precondition base > 1");

    const SlotDurations dur = equal_slot_durations(table.payload_bits, table.data_rate);
    std::string body = "M,R_simo_bps,S_simo_star_bps,simo_per_M_bps,S_mpr_star_bps,mpr_per_M_bps\n";
    for (int m = m_min; m <= m_max; ++m) {
        const double r_simo =
            table.data_rate + std::log(static_cast<double>(m)) / std::log(log_base);
        const double simo_star = simo_asymptotic_optimum(table.data_rate, m, log_base);
        const double mpr_star = optimal_attempt_rate(m, dur, table.payload_bits).throughput;
        body += std::to_string(m) + "," + fmt_throughput(r_simo) + "," +
                fmt_throughput(simo_star) + "," + fmt_throughput(simo_star / m) + "," +
                fmt_throughput(mpr_star) + "," + fmt_throughput(mpr_star / m) + "\n";
    }
    return body;
}

inline std::string run_phy_demo(ParamReader& reader) {
    const std::vector<std::string> detectors = reader.get_string_list("detector", "zf,mmse");
    const int sources = reader.get_int("k", 2);
    const int antennas = reader.get_int("m_ant", 4);
    const std::vector<double> snr_list = reader.get_double_list("snr_db", "10");
    const int block_len = reader.get_int("n_sym", 64);
    const int trials = reader.get_int("trials", 50);
    const std::uint64_t seed = reader.get_u64("seed", 1);
    const phy::Alphabet alphabet = detail::alphabet_from(reader);
    const int restarts = reader.get_int("restarts", 8);
    const int max_iterations = reader.get_int("max_iter", 50);

    if (trials < 1) throw std::invalid_argument("trials violates precondition >= 1");
    if (sources < 1 || sources > antennas) {
        throw std::invalid_argument("source count violates precondition 1 <= K <= M_ant");
    }
    if (block_len < 1) throw std::invalid_argument("block length violates precondition N_sym >= 1");
    for (const std::string& d : detectors) {
        if (d != "zf" && d != "mmse" && d != "exhaustive" && d != "ilsp") {
            throw std::invalid_argument("detector must be one of zf|mmse|exhaustive|ilsp (got \"" +
                                        d + "\")");
        }
        if (d == "exhaustive" &&
            sources * block_len * std::log2(static_cast<double>(alphabet.symbols.size())) > 24.0) {
            throw std::invalid_argument(
                "search space exceeds 2^24 candidates; shrink k or n_sym for the exhaustive detector");
        }
    }

    std::string body = "detector,K,M_ant,snr_db,N_sym,trials,symbol_error_rate,recovery_rate\n";
    std::uint64_t draw = 0;
    for (const std::string& det : detectors) {
        for (double snr : snr_list) {
            long errors = 0;
            int recovered = 0;
            for (int t = 0; t < trials; ++t) {
                const phy::SignalBlock block = phy::synthesize(
                    antennas, sources, block_len, alphabet, snr, sim::derive_seed(seed, draw++));
                int trial_errors = 0;
                if (det == "zf" || det == "mmse") {
                    const phy::DetectionResult r =
                        det == "zf" ? phy::zf_detect(block) : phy::mmse_detect(block);
                    for (int row = 0; row < r.symbols.rows(); ++row)
                        for (int col = 0; col < r.symbols.cols(); ++col)
                            trial_errors +=
                                std::abs(r.symbols(row, col) - block.symbols(row, col)) > 1e-9;
                } else {
                    phy::DetectionResult r;
                    if (det == "exhaustive") {
                        r = phy::blind_detect_exhaustive(block.received, sources, alphabet);
                    } else {
                        phy::IlspOptions opts;
                        opts.seed = sim::derive_seed(seed, draw++);
                        opts.restarts = restarts;
                        opts.max_iterations = max_iterations;
                        r = phy::blind_detect_ilsp(block.received, sources, alphabet, opts);
                    }
                    trial_errors =
                        phy::align_ambiguity(r.symbols, block.symbols, alphabet).symbol_errors;
                }
                errors += trial_errors;
                recovered += trial_errors == 0;
            }
            const double ser =
                static_cast<double>(errors) / (static_cast<double>(sources) * block_len * trials);
            body += det + "," + std::to_string(sources) + "," + std::to_string(antennas) + "," +
                    fmt_rate(snr) + "," + std::to_string(block_len) + "," +
                    std::to_string(trials) + "," + fmt_prob(ser) + "," +
                    fmt_prob(static_cast<double>(recovered) / trials) + "\n";
        }
    }
    return body;
}

// ---------------------------------------------------------------------------
// dispatch

inline void run_scenario(const Scenario& s) {
    if (s.output_path.empty()) throw std::invalid_argument("output path must not be empty");
    ParamReader reader(s.params);
    std::string body;
    if (s.kind == "scaling") {
        body = run_scaling(reader);
    } else if (s.kind == "fixed-point") {
        body = run_fixed_point(reader);
    } else if (s.kind == "optimal-r" || s.kind == "beb-efficiency") {
        body = run_optimal_r(reader);
    } else if (s.kind == "simulate") {
        body = run_simulate(reader);
    } else if (s.kind == "simo-compare") {
        body = run_simo_compare(reader);
    } else if (s.kind == "phy-demo") {
        body = run_phy_demo(reader);
    } else {
        throw std::invalid_argument("unknown scenario kind: " + s.kind);
    }
    reader.reject_unknown(s.kind);
    detail::write_file(s.output_path, reader.resolved_line(s.kind) + "\n" + body);
}

// Scenario assembled from (in increasing precedence) per-kind defaults, the
// config file's global section, the config file's [kind] section, and
// command-line overrides.
inline Scenario make_scenario(const std::string& kind, const std::string& config_path,
                              const std::string& out_override,
                              std::optional<std::uint64_t> seed_override) {
    Scenario s;
    s.kind = kind;
    if (!config_path.empty()) {
        auto sections = parse_config_file(config_path);
        for (const auto& [key, value] : sections[""]) s.params[key] = value;
        const auto it = sections.find(kind);
        if (it != sections.end()) {
            for (const auto& [key, value] : it->second) s.params[key] = value;
        }
    }
    if (seed_override) s.params["seed"] = std::to_string(*seed_override);
    s.output_path = out_override.empty() ? kind + ".csv" : out_override;
    return s;
}

// ---------------------------------------------------------------------------
// bundled parameter studies ("reproduce"): canned scenarios over the
// capability, population and backoff-factor grids the library documents.

namespace detail {

inline std::string with_suffix(const std::string& path, const std::string& suffix) {
    const auto dot = path.rfind('.');
    if (dot == std::string::npos || path.find('/', dot) != std::string::npos) {
        return path + suffix;
    }
    return path.substr(0, dot) + suffix + path.substr(dot);
}

// Throughput-versus-backoff-factor curves (no fixed scenario kind emits
// these; the study writes M,r,S_bps rows directly).
inline std::string backoff_factor_curves(AccessMode mode) {
    const Ieee80211g table = default_table1();
    std::string body = "M,r,S_bps\n";
    for (int m : {1, 2, 4, 10}) {
        const SlotDurations dur = durations_for(mode, table, m);
        for (double r = 12; r <= 100; ++r) {  // 1.2 .. 10.0 in steps of 0.1
            const double factor = r / 10.0;
            body += std::to_string(m) + "," + fmt_rate(factor) + "," +
                    fmt_throughput(asymptotic_throughput_of_r(m, factor, dur, table.payload_bits)) +
                    "\n";
        }
    }
    return body;
}

}  // namespace detail

inline std::vector<std::string> run_reproduce(const std::string& figure_id,
                                              const std::string& out_override,
                                              std::optional<std::uint64_t> seed_override) {
    const std::string out = out_override.empty() ? figure_id + ".csv" : out_override;
    const std::uint64_t seed = seed_override.value_or(42);
    std::vector<std::string> written;

    auto run_kind = [&](const std::string& kind, ParamMap params, const std::string& path) {
        Scenario s;
        s.kind = kind;
        params["seed"] = std::to_string(seed);
        s.params = std::move(params);
        s.output_path = path;
        run_scenario(s);
        written.push_back(path);
    };

    if (figure_id == "fig1") {
        // Normalized optimal throughput of the non-carrier-sensing network.
        run_kind("scaling", {{"mode", "aloha"}, {"m_min", "1"}, {"m_max", "30"}}, out);
    } else if (figure_id == "fig2" || figure_id == "fig3") {
        // Optimal carrier-sensing throughput (and its per-capability view).
        run_kind("scaling", {{"mode", "basic"}, {"m_min", "1"}, {"m_max", "10"}},
                 detail::with_suffix(out, "_basic"));
        run_kind("scaling", {{"mode", "rtscts"}, {"m_min", "1"}, {"m_max", "10"}},
                 detail::with_suffix(out, "_rtscts"));
    } else if (figure_id == "fig5") {
        // Aggregate attempt rate versus population under binary backoff.
        run_kind("fixed-point",
                 {{"mode", "aloha"}, {"n", "5,10,20,50,100,200"}, {"m", "1,2"},
                  {"w0", "16,32"}, {"r", "2"}, {"measure_slots", "200000"}},
                 out);
    } else if (figure_id == "fig6") {
        // Slotted-network throughput versus population.
        run_kind("fixed-point",
                 {{"mode", "aloha"}, {"n", "5,10,20,50,100,200"}, {"m", "1,2,4"},
                  {"w0", "16,32"}, {"r", "2"}, {"measure_slots", "200000"}},
                 out);
    } else if (figure_id == "fig7") {
        // Basic-access throughput versus population.
        run_kind("fixed-point",
                 {{"mode", "basic"}, {"n", "5,10,20,50,100,200"}, {"m", "1,2,4"},
                  {"w0", "16,32"}, {"r", "2"}, {"measure_slots", "200000"}},
                 out);
    } else if (figure_id == "fig8" || figure_id == "fig9") {
        // Throughput versus backoff factor.
        const AccessMode mode =
            figure_id == "fig8" ? AccessMode::NonCarrierSensing : AccessMode::BasicAccess;
        const std::string header = "# kind=backoff-curve mode=" + to_string(mode) +
                                   " m=1,2,4,10 r=1.2..10.0 step=0.1\n";
        detail::write_file(out, header + detail::backoff_factor_curves(mode));
        written.push_back(out);
    } else if (figure_id == "fig10" || figure_id == "fig11") {
        // Best backoff factor and the binary-backoff throughput ratio.
        run_kind("optimal-r",
                 {{"mode", "aloha,basic,rtscts"}, {"m_min", "1"}, {"m_max", "15"}}, out);
    } else {
        throw std::invalid_argument(
            "unknown study id: " + figure_id +
            " (expected fig1, fig2, fig3, fig5, fig6, fig7, fig8, fig9, fig10 or fig11)");
    }
    return written;
}

}  // namespace mpr::scenario
