#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace pell::arith {

/// Time/iteration budget for factorization. Exhausting it is not an error;
/// the result simply carries an unfactored cofactor.
struct Budget {
    std::int64_t time_ms = 5000;
    std::uint64_t rho_iters = std::uint64_t{1} << 26;
};

/// Prime-power decomposition n = cofactor * prod p_i^e_i with primes strictly
/// increasing and cofactor = 1 when the factorization is complete.
struct Factorization {
    mpz_class n;
    std::vector<std::pair<mpz_class, unsigned>> factors;
    mpz_class cofactor{1};

    bool complete() const { return cofactor == 1; }
};

/// Floor square root. Rejects negative input.
mpz_class isqrt(const mpz_class& n);

/// Returns the root when n is a perfect square, absent otherwise.
/// Cheap residue filter (mod 64) before the exact test.
std::optional<mpz_class> is_perfect_square(const mpz_class& n);

/// Deterministic Miller-Rabin for 64-bit inputs; `rounds` random-base rounds
/// (seeded) above that.
bool is_prime(const mpz_class& n, int rounds = 40, unsigned long seed = 0);

/// Trial division up to 10^6, then Pollard-Brent rho. Never fails: leftover
/// composite material ends up in the cofactor.
Factorization factorize(const mpz_class& n, const Budget& budget = {});

/// Same, for n = lhs * rhs with the split already known (x^2-1 = (x-1)(x+1)).
Factorization factorize_split(const mpz_class& lhs, const mpz_class& rhs,
                              const Budget& budget = {});

/// Square-free part: product of primes with odd exponent.
/// Requires a complete factorization.
mpz_class squarefree_part(const Factorization& f);

/// All d >= 1 with d^2 | f.n, ascending. Requires a complete factorization.
std::vector<mpz_class> square_divisors(const Factorization& f);

/// Reduces num/den and returns (root of num', root of den') when both reduced
/// parts are perfect squares. Rejects den = 0.
std::optional<std::pair<mpz_class, mpz_class>> rational_square_root(
    const mpz_class& num, const mpz_class& den);

}  // namespace pell::arith
