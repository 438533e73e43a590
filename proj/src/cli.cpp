#include "cogsel/cli.hpp"

#include "cogsel/simulator.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

namespace cogsel::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double to_real(std::string_view s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw UsageError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

std::uint64_t to_uint(std::string_view s) {
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw UsageError("not a non-negative integer: '" + std::string(s) + "'");
    }
    return v;
}

FineRanking parse_ranking(const std::string& name) {
    if (name == "kkt-weighted") return FineRanking::kkt_weighted;
    if (name == "unweighted") return FineRanking::unweighted;
    throw UsageError("unknown fine ranking: " + name);
}

OptResult solve_with(const Instance& inst, Method m, FineRanking ranking, const ExhaustiveOptions& opts) {
    if (m == Method::fine) return fine_optimize(inst, coarse_optimize(inst), ranking);
    return run_method(inst, m, opts);
}

nlohmann::ordered_json detail_json(const Instance& inst, const OptResult& r) {
    nlohmann::ordered_json j;
    j["method"] = to_string(r.method);
    j["selected"] = r.sensing.indices();
    j["water_level"] = r.alloc.water_level;
    j["capacity_nats"] = r.alloc.capacity_nats;
    j["capacity_bits"] = nats_to_bits(r.alloc.capacity_nats);
    j["powers"] = r.alloc.powers;
    j["iterations"] = r.iterations;
    j["certified_optimal"] = r.certified_optimal;
    j["lambda_min"] = r.lambda_min;
    j["cycled"] = r.cycled;
    j["initial"] = r.initial.indices();
    auto trace = nlohmann::ordered_json::array();
    for (const auto& step : r.trace) {
        trace.push_back({{"water_level", step.water_level}, {"selected", step.selected.indices()}});
    }
    j["trace"] = std::move(trace);
    j["n"] = inst.size();
    j["l"] = inst.sensing_budget;
    j["power_budget"] = inst.power_budget;
    return j;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + path);
    f << text;
    if (!f) throw Error("write failed: " + path);
}

}  // namespace

std::vector<double> parse_snr_range(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() == 1) return {to_real(parts[0])};
    if (parts.size() != 3) throw UsageError("SNR range must be start:stop:step");
    const double start = to_real(parts[0]);
    const double stop = to_real(parts[1]);
    const double step = to_real(parts[2]);
    if (!(step > 0.0)) throw UsageError("SNR step must be positive");
    if (stop < start) throw UsageError("SNR stop must be >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw UsageError("SNR range too long");
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
    std::vector<std::uint64_t> out;
    for (auto part : split(text, ',')) {
        const std::size_t dots = part.find("..");
        if (dots == std::string_view::npos) {
            out.push_back(to_uint(part));
            continue;
        }
        const std::uint64_t lo = to_uint(trim(part.substr(0, dots)));
        const std::uint64_t hi = to_uint(trim(part.substr(dots + 2)));
        if (hi < lo) throw UsageError("seed range end before start: " + std::string(part));
        if (hi - lo >= 10'000'000) throw UsageError("seed range too long");
        for (std::uint64_t s = lo;; ++s) {
            out.push_back(s);
            if (s == hi) break;
        }
    }
    return out;
}

std::vector<Method> parse_method_list(std::string_view text) {
    std::vector<Method> out;
    for (auto part : split(text, ',')) {
        try {
            out.push_back(parse_method(part));
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

std::vector<ResultRecord> run_sweep(const SweepConfig& cfg) {
    struct Cell {
        std::uint64_t seed;
        double snr_db;
    };
    std::vector<Cell> cells;
    for (auto seed : cfg.seeds) {
        for (double snr : cfg.snr_db) cells.push_back({seed, snr});
    }
    const std::size_t per_cell = cfg.methods.size();
    std::vector<ResultRecord> rows(cells.size() * per_cell);

    ExhaustiveOptions opts;
    opts.enumeration_cap = cfg.enumeration_cap;
    opts.threads = 1;  // parallelism is across cells

    // Validates dimensions once so workers only see valid instances.
    (void)generate_instance(0, cfg.n, cfg.l, 0.0, cfg.taps);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t c; !failed && (c = next.fetch_add(1)) < cells.size();) {
            try {
                const Instance inst = generate_instance(cells[c].seed, cfg.n, cfg.l, cells[c].snr_db, cfg.taps);
                for (std::size_t m = 0; m < per_cell; ++m) {
                    const auto t0 = std::chrono::steady_clock::now();
                    OptResult r = solve_with(inst, cfg.methods[m], cfg.fine_ranking, opts);
                    const auto t1 = std::chrono::steady_clock::now();
                    const double ms =
                        cfg.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
                    rows[c * per_cell + m] = make_record(inst, r, ms, cells[c].seed, cells[c].snr_db);
                }
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };

    unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(cells.size(), 1)));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Joint sensing-channel selection and power allocation for cognitive radio"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random frequency-selective instance");
    std::uint64_t gen_seed = 1;
    int gen_n = 16, gen_l = 8, gen_taps = 4;
    double gen_snr = 10.0;
    std::string gen_out;
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--n", gen_n, "Number of channels")->check(CLI::PositiveNumber);
    gen->add_option("--l", gen_l, "Sensing budget")->check(CLI::PositiveNumber);
    gen->add_option("--snr-db", gen_snr, "Per-channel average SNR in dB");
    gen->add_option("--taps", gen_taps, "Impulse response taps")->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_out, "Output file (stdout if omitted)");

    // solve
    auto* solve = app.add_subcommand("solve", "Solve an instance file, print one CSV row");
    std::string solve_in, solve_method = "fine", solve_json, solve_ranking = "kkt-weighted";
    std::optional<std::uint64_t> solve_seed;
    std::optional<double> solve_snr;
    bool solve_no_header = false, solve_no_timing = false;
    std::uint64_t solve_cap = ExhaustiveOptions{}.enumeration_cap;
    solve->add_option("--in", solve_in, "Instance JSON file")->required();
    solve->add_option("--method", solve_method, "coarse | fine | exhaustive");
    solve->add_option("--json", solve_json, "Write detail JSON (trace, powers) to this file, '-' for stdout");
    solve->add_option("--fine-ranking", solve_ranking, "kkt-weighted | unweighted");
    solve->add_option("--seed", solve_seed, "Seed to record in the seed column");
    solve->add_option("--snr-db", solve_snr, "SNR to record in the snr_db column");
    solve->add_option("--cap", solve_cap, "Exhaustive enumeration cap");
    solve->add_flag("--no-header", solve_no_header, "Omit the CSV header");
    solve->add_flag("--no-timing", solve_no_timing, "Write wall_ms as 0");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Generate and solve a seed x SNR grid, print CSV");
    SweepConfig sweep_cfg;
    std::string sweep_snr = "-10:30:5", sweep_seeds = "1..10", sweep_methods = "coarse,fine,exhaustive";
    std::string sweep_out, sweep_ranking = "kkt-weighted";
    bool sweep_no_timing = false;
    sweep->add_option("--n", sweep_cfg.n, "Number of channels")->check(CLI::PositiveNumber);
    sweep->add_option("--l", sweep_cfg.l, "Sensing budget")->check(CLI::PositiveNumber);
    sweep->add_option("--taps", sweep_cfg.taps, "Impulse response taps")->check(CLI::PositiveNumber);
    sweep->add_option("--snr-db", sweep_snr, "start:stop:step in dB, inclusive");
    sweep->add_option("--seeds", sweep_seeds, "Seeds, e.g. 1..100 or 1,2,5");
    sweep->add_option("--methods", sweep_methods, "Comma-separated methods");
    sweep->add_option("--fine-ranking", sweep_ranking, "kkt-weighted | unweighted");
    sweep->add_option("--threads", sweep_cfg.threads, "Worker threads (0: all cores)");
    sweep->add_option("--cap", sweep_cfg.enumeration_cap, "Exhaustive enumeration cap");
    sweep->add_option("--out", sweep_out, "Output CSV file (stdout if omitted)");
    sweep->add_flag("--no-timing", sweep_no_timing, "Write wall_ms as 0 for byte-identical reruns");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Solve, then Monte Carlo the static policy");
    std::string sim_in, sim_method = "fine";
    std::int64_t sim_slots = 100000;
    std::uint64_t sim_seed = 1;
    double sim_sigmas = 3.0;
    sim->add_option("--in", sim_in, "Instance JSON file")->required();
    sim->add_option("--method", sim_method, "coarse | fine | exhaustive");
    sim->add_option("--slots", sim_slots, "Number of slots")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "Simulation seed");
    sim->add_option("--sigmas", sim_sigmas, "Band half-width in standard errors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) {
            if (gen_l > gen_n) throw UsageError("--l must not exceed --n");
            write_text(gen_out, write_instance(generate_instance(gen_seed, gen_n, gen_l, gen_snr, gen_taps)), out);
        } else if (*solve) {
            const Method method = parse_method_list(solve_method).at(0);
            const FineRanking ranking = parse_ranking(solve_ranking);
            const Instance inst = load_instance_file(solve_in);
            ExhaustiveOptions opts;
            opts.enumeration_cap = solve_cap;
            const auto t0 = std::chrono::steady_clock::now();
            const OptResult r = solve_with(inst, method, ranking, opts);
            const auto t1 = std::chrono::steady_clock::now();
            const double ms = solve_no_timing ? 0.0 : std::chrono::duration<double, std::milli>(t1 - t0).count();
            if (!solve_no_header) out << kCsvHeader << '\n';
            out << to_csv_row(make_record(inst, r, ms, solve_seed, solve_snr)) << '\n';
            if (!solve_json.empty()) write_text(solve_json, detail_json(inst, r).dump(2) + "\n", out);
        } else if (*sweep) {
            if (sweep_cfg.l > sweep_cfg.n) throw UsageError("--l must not exceed --n");
            sweep_cfg.snr_db = parse_snr_range(sweep_snr);
            sweep_cfg.seeds = parse_seed_list(sweep_seeds);
            sweep_cfg.methods = parse_method_list(sweep_methods);
            sweep_cfg.fine_ranking = parse_ranking(sweep_ranking);
            sweep_cfg.timing = !sweep_no_timing;
            std::string text(kCsvHeader);
            text += '\n';
            for (const auto& rec : run_sweep(sweep_cfg)) text += to_csv_row(rec) + '\n';
            write_text(sweep_out, text, out);
        } else if (*sim) {
            const Method method = parse_method_list(sim_method).at(0);
            const Instance inst = load_instance_file(sim_in);
            const OptResult r = run_method(inst, method);
            const SimResult s = simulate(inst, r.sensing, r.alloc, sim_slots, sim_seed);
            const double analytical = r.alloc.capacity_nats;
            out << "method: " << to_string(method) << '\n';
            out << "selected_bitmask_hex: " << r.sensing.to_hex_mask() << '\n';
            out << "slots: " << s.slots << '\n';
            out << "analytical_capacity_nats: " << format_double(analytical) << '\n';
            out << "empirical_rate_nats: " << format_double(s.empirical_rate) << '\n';
            out << "rate_stderr: " << format_double(s.rate_stderr) << '\n';
            out << "power_budget: " << format_double(inst.power_budget) << '\n';
            out << "empirical_avg_power: " << format_double(s.empirical_avg_power) << '\n';
            out << "power_stderr: " << format_double(s.power_stderr) << '\n';
            if (s.slots < 2) {
                out << "rate_band: n/a\n";
            } else {
                out << "rate_band: " << (s.within_band(analytical, sim_sigmas) ? "pass" : "fail") << '\n';
            }
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace cogsel::cli
