#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pell/arith.hpp"
#include "pell/bounds.hpp"
#include "pell/quadfield.hpp"

namespace pell::verifier {

struct Config {
    long precision_bits = 192;
    long precision_ceiling_bits = 32768;
    std::int64_t factor_budget_ms = 5000;
    std::uint64_t scan_cap = 10'000'000;
    unsigned long seed = 0;
};

enum class Status { unique_certified, pairs_found, not_certified };

std::string status_name(Status s);

struct CandidateInfo {
    unsigned long n = 0;
    mpz_class x;                          // 0 when the candidate is non-integral
    std::optional<std::string> skipped;   // absent = kept
};

struct ReductionInfo {
    unsigned long n = 0;
    unsigned long l = 0;
    mpz_class q_k;
    std::string kappa;
    std::optional<mpz_class> bound;       // reduced bound on n2; absent = failed
};

struct RecoveredCoeffs {
    mpz_class a, y, y_prime, z, z_prime;
};

struct SolutionPair {
    unsigned long n = 0, n_prime = 0;
    mpz_class x, x_prime;
    std::vector<RecoveredCoeffs> recovered;
    bool recovery_partial = false;
};

struct VerificationReport {
    mpz_class b;
    Status status = Status::not_certified;
    std::string reason;                   // trivial short-circuits / failure stage
    std::optional<quadfield::QuadElem> epsilon;
    mpz_class c_m;
    mpz_class c_n1;
    mpz_class witness_q;                  // q_k certifying c_n1
    std::vector<CandidateInfo> candidates;
    std::vector<ReductionInfo> reductions;
    std::vector<SolutionPair> pairs;
    std::map<std::string, double> timings_ms;
};

/// Runs the full single-b verification: fundamental unit, bound set,
/// candidate scan with skip tests, per-l reduction, second-solution scan and
/// solution recovery. Never reports unique_certified on any failure.
VerificationReport verify_b(const mpz_class& b, const Config& cfg = {});

/// Enumerates square divisors d of x^2-1 and keeps a = (x^2-1)/d^2 whenever
/// (x'^2-1)/a is also a perfect square; emits the full tuples.
std::vector<RecoveredCoeffs> recover_solutions(const mpz_class& b, const mpz_class& x,
                                               const mpz_class& x_prime,
                                               const arith::Factorization& f,
                                               const arith::Factorization& f_prime);

/// All (z, x) with z^2 - b x^2 = 1 and 1 <= x <= x_max, by direct scan
/// cross-checked against the recurrence from the Pell fundamental solution.
std::vector<std::pair<mpz_class, mpz_class>> brute_force_oracle(const mpz_class& b,
                                                                const mpz_class& x_max);

}  // namespace pell::verifier
