#include "pell/arith.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace pell::arith {

namespace {

constexpr unsigned long kTrialBound = 1'000'000;

const std::vector<unsigned long>& small_primes() {
    static const std::vector<unsigned long> primes = [] {
        std::vector<bool> sieve(kTrialBound + 1, true);
        sieve[0] = sieve[1] = false;
        for (unsigned long p = 2; p * p <= kTrialBound; ++p)
            if (sieve[p])
                for (unsigned long q = p * p; q <= kTrialBound; q += p) sieve[q] = false;
        std::vector<unsigned long> out;
        for (unsigned long p = 2; p <= kTrialBound; ++p)
            if (sieve[p]) out.push_back(p);
        return out;
    }();
    return primes;
}

bool miller_rabin_round(const mpz_class& n, const mpz_class& base,
                        const mpz_class& d, unsigned long s) {
    mpz_class x;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

using Clock = std::chrono::steady_clock;

struct Deadline {
    Clock::time_point end;
    bool expired() const { return Clock::now() >= end; }
};

// Pollard-Brent rho; returns a nontrivial factor of odd composite n, or
// absent on budget exhaustion.
std::optional<mpz_class> pollard_brent(const mpz_class& n, const Budget& budget,
                                       const Deadline& deadline) {
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xb5297a4d);
    for (int attempt = 0; attempt < 64; ++attempt) {
        mpz_class y = rng.get_z_range(n - 3) + 2;
        mpz_class c = rng.get_z_range(n - 2) + 1;
        mpz_class x, ys, q = 1, g = 1;
        const unsigned long m = 128;
        std::uint64_t iters = 0;
        unsigned long r = 1;
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
            for (unsigned long k = 0; k < r && g == 1; k += m) {
                ys = y;
                const unsigned long lim = std::min(m, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                iters += lim;
                if (iters > budget.rho_iters || deadline.expired()) return std::nullopt;
            }
            r *= 2;
        }
        if (g == n) {
            // backtrack one step at a time
            do {
                ys = (ys * ys + c) % n;
                mpz_gcd(g.get_mpz_t(), mpz_class(abs(x - ys)).get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
    return std::nullopt;
}

void factor_into(const mpz_class& n, const Budget& budget, const Deadline& deadline,
                 std::vector<std::pair<mpz_class, unsigned>>& out, mpz_class& cofactor) {
    if (n == 1) return;
    std::vector<mpz_class> stack{n};
    while (!stack.empty()) {
        mpz_class m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_prime(m)) {
            out.emplace_back(m, 1);
            continue;
        }
        if (auto r = is_perfect_square(m)) {
            stack.push_back(*r);
            stack.push_back(*r);
            continue;
        }
        if (deadline.expired()) {
            cofactor *= m;
            continue;
        }
        if (auto g = pollard_brent(m, budget, deadline)) {
            stack.push_back(*g);
            stack.push_back(m / *g);
        } else {
            cofactor *= m;
        }
    }
}

Factorization assemble(const mpz_class& n, std::vector<std::pair<mpz_class, unsigned>> raw,
                       mpz_class cofactor) {
    std::sort(raw.begin(), raw.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Factorization f;
    f.n = n;
    f.cofactor = std::move(cofactor);
    for (auto& [p, e] : raw) {
        if (!f.factors.empty() && f.factors.back().first == p)
            f.factors.back().second += e;
        else
            f.factors.emplace_back(std::move(p), e);
    }
    return f;
}

}  // namespace

mpz_class isqrt(const mpz_class& n) {
    if (n < 0) throw std::invalid_argument("isqrt: negative input");
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::optional<mpz_class> is_perfect_square(const mpz_class& n) {
    if (n < 0) return std::nullopt;
    // squares mod 64 are sparse; reject most non-squares without a root extraction
    static const bool square_mod64[64] = {
        true,  true,  false, false, true,  false, false, false, false, true,
        false, false, false, false, false, false, true,  true,  false, false,
        false, false, false, false, false, true,  false, false, false, false,
        false, false, false, true,  false, false, true,  false, false, false,
        false, true,  false, false, false, false, false, false, false, true,
        false, false, false, false, false, false, false, true,  false, false,
        false, false, false, false};
    if (!square_mod64[mpz_class(n % 64).get_ui()]) return std::nullopt;
    if (!mpz_perfect_square_p(n.get_mpz_t())) return std::nullopt;
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_prime(const mpz_class& n, int rounds, unsigned long seed) {
    if (n < 2) return false;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    mpz_class d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
        // these bases are a known deterministic witness set below 2^64
        for (unsigned long a : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul})
            if (!miller_rabin_round(n, a, d, s)) return false;
        return true;
    }
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(seed ? seed : 0x5eed5eedul);
    for (int i = 0; i < rounds; ++i) {
        mpz_class base = rng.get_z_range(n - 3) + 2;
        if (!miller_rabin_round(n, base, d, s)) return false;
    }
    return true;
}

Factorization factorize(const mpz_class& n, const Budget& budget) {
    if (n < 1) throw std::invalid_argument("factorize: input must be positive");
    Deadline deadline{Clock::now() + std::chrono::milliseconds(budget.time_ms)};
    std::vector<std::pair<mpz_class, unsigned>> raw;
    mpz_class rest = n;
    for (unsigned long p : small_primes()) {
        if (mpz_class(rest % p) != 0) {
            if (mpz_class(p) * p > rest) break;
            continue;
        }
        unsigned e = 0;
        do {
            rest /= p;
            ++e;
        } while (rest % p == 0);
        raw.emplace_back(p, e);
    }
    mpz_class cofactor = 1;
    factor_into(rest, budget, deadline, raw, cofactor);
    return assemble(n, std::move(raw), std::move(cofactor));
}

Factorization factorize_split(const mpz_class& lhs, const mpz_class& rhs,
                              const Budget& budget) {
    Budget half = budget;
    half.time_ms = std::max<std::int64_t>(1, budget.time_ms / 2);
    Factorization a = factorize(lhs, half);
    Factorization b = factorize(rhs, half);
    std::vector<std::pair<mpz_class, unsigned>> raw = a.factors;
    raw.insert(raw.end(), b.factors.begin(), b.factors.end());
    return assemble(lhs * rhs, std::move(raw), a.cofactor * b.cofactor);
}

mpz_class squarefree_part(const Factorization& f) {
    if (!f.complete())
        throw std::invalid_argument("squarefree_part: incomplete factorization");
    mpz_class pi = 1;
    for (const auto& [p, e] : f.factors)
        if (e % 2 == 1) pi *= p;
    return pi;
}

std::vector<mpz_class> square_divisors(const Factorization& f) {
    if (!f.complete())
        throw std::invalid_argument("square_divisors: incomplete factorization");
    std::vector<mpz_class> out{1};
    for (const auto& [p, e] : f.factors) {
        const unsigned half = e / 2;
        if (half == 0) continue;
        const std::size_t base = out.size();
        mpz_class pk = 1;
        for (unsigned k = 1; k <= half; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::pair<mpz_class, mpz_class>> rational_square_root(
    const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::invalid_argument("rational_square_root: zero denominator");
    if (num < 1 || den < 1)
        throw std::invalid_argument("rational_square_root: inputs must be positive");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpz_class n = num / g, d = den / g;
    auto rn = is_perfect_square(n);
    if (!rn) return std::nullopt;
    auto rd = is_perfect_square(d);
    if (!rd) return std::nullopt;
    return std::make_pair(*rn, *rd);
}

}  // namespace pell::arith
