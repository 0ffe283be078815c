#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

#include "pell/report_json.hpp"
#include "pell/verifier.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using pell::verifier::Config;
using pell::verifier::Status;

namespace {

std::string config_fingerprint(const Config& cfg) {
    std::string s = "precision=" + std::to_string(cfg.precision_bits) +
                    ";ceiling=" + std::to_string(cfg.precision_ceiling_bits) +
                    ";budget=" + std::to_string(cfg.factor_budget_ms) +
                    ";cap=" + std::to_string(cfg.scan_cap) +
                    ";seed=" + std::to_string(cfg.seed);
    // FNV-1a, stable across processes
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << content;
        out.flush();
    }
    fs::rename(tmp, path);
}

int run_verify(long b, bool json_out, const Config& cfg) {
    auto report = pell::verifier::verify_b(b, cfg);
    if (json_out)
        std::cout << pell::verifier::report_to_json(report).dump() << "\n";
    else
        std::cout << pell::verifier::report_to_text(report);
    switch (report.status) {
        case Status::unique_certified: return 0;
        case Status::pairs_found: return 2;
        case Status::not_certified: return 3;
    }
    return 1;
}

struct SweepState {
    std::mutex mu;
    std::ofstream out;
    std::set<long> completed;
    std::size_t n_unique = 0, n_pairs = 0, n_uncertified = 0;
    double total_ms = 0, max_ms = 0;
};

int run_sweep(long from, long to, unsigned jobs, const std::string& out_path,
              const std::string& ckpt_path, const Config& cfg) {
    const std::string fp = config_fingerprint(cfg);
    std::set<long> done;
    if (!ckpt_path.empty() && fs::exists(ckpt_path)) {
        std::ifstream in(ckpt_path);
        ordered_json ck = ordered_json::parse(in);
        if (ck.value("fingerprint", "") != fp || ck.value("from", 0L) != from ||
            ck.value("to", 0L) != to) {
            std::cerr << "error: checkpoint does not match range/config\n";
            return 1;
        }
        for (long b : ck["completed"]) done.insert(b);
    }

    std::vector<long> todo;
    for (long b = from; b <= to; ++b)
        if (!done.count(b)) todo.push_back(b);

    SweepState st;
    st.completed = done;
    st.out.open(out_path, std::ios::app);
    if (!st.out) {
        std::cerr << "error: cannot open " << out_path << "\n";
        return 1;
    }

    auto write_checkpoint = [&] {
        if (ckpt_path.empty()) return;
        ordered_json ck{{"schema", 1}, {"from", from}, {"to", to},
                        {"fingerprint", fp}};
        ck["completed"] = st.completed;
        atomic_write(ckpt_path, ck.dump());
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            const long b = todo[i];
            auto report = pell::verifier::verify_b(b, cfg);
            const std::string line =
                pell::verifier::report_to_json(report).dump() + "\n";
            std::lock_guard<std::mutex> lk(st.mu);
            st.out << line;
            st.out.flush();
            st.completed.insert(b);
            switch (report.status) {
                case Status::unique_certified: ++st.n_unique; break;
                case Status::pairs_found: ++st.n_pairs; break;
                case Status::not_certified: ++st.n_uncertified; break;
            }
            const double ms = report.timings_ms.count("total")
                                  ? report.timings_ms.at("total")
                                  : 0.0;
            st.total_ms += ms;
            st.max_ms = std::max(st.max_ms, ms);
            write_checkpoint();
        }
    };

    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    const std::size_t n = st.completed.size();
    std::cout << "sweep [" << from << ", " << to << "]: " << n << " values, "
              << st.n_unique << " unique_certified, " << st.n_pairs
              << " pairs_found, " << st.n_uncertified << " not_certified; "
              << "total " << st.total_ms / 1000.0 << " s, mean "
              << (todo.empty() ? 0.0 : st.total_ms / todo.size() / 1000.0)
              << " s/b, max " << st.max_ms / 1000.0 << " s\n";
    if (st.n_pairs > 0) return 2;
    if (st.n_uncertified > 0) return 3;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified uniqueness checks for the simultaneous Pell equations "
                 "x^2 - a y^2 = 1, z^2 - b x^2 = 1"};
    app.require_subcommand(1);

    Config cfg;
    app.add_option("--precision-bits", cfg.precision_bits,
                   "initial working precision")->capture_default_str();
    app.add_option("--precision-ceiling-bits", cfg.precision_ceiling_bits,
                   "adaptive precision ceiling")->capture_default_str();
    app.add_option("--factor-budget-ms", cfg.factor_budget_ms,
                   "per-candidate factorization budget")->capture_default_str();
    app.add_option("--scan-cap", cfg.scan_cap,
                   "largest tolerated second-solution scan range")->capture_default_str();
    app.add_option("--seed", cfg.seed,
                   "seed for randomized primality rounds")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "verify a single b");
    long b = 0;
    bool json_out = false, text_out = false;
    verify->add_option("--b", b, "the fixed coefficient b")->required();
    verify->add_flag("--json", json_out, "machine-readable record");
    verify->add_flag("--text", text_out, "human-readable summary (default)");

    auto* sweep = app.add_subcommand("sweep", "verify a whole range of b");
    long from = 0, to = 0;
    unsigned jobs = std::thread::hardware_concurrency();
    std::string out_path = "sweep.jsonl", ckpt_path;
    sweep->add_option("--from", from)->required();
    sweep->add_option("--to", to)->required();
    sweep->add_option("--jobs", jobs)->capture_default_str();
    sweep->add_option("--out", out_path)->capture_default_str();
    sweep->add_option("--checkpoint", ckpt_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            if (b < 1) {
                std::cerr << "error: --b must be >= 1\n";
                return 1;
            }
            return run_verify(b, json_out && !text_out, cfg);
        }
        if (from < 1 || to < from) {
            std::cerr << "error: need 1 <= from <= to\n";
            return 1;
        }
        return run_sweep(from, to, jobs, out_path, ckpt_path, cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
