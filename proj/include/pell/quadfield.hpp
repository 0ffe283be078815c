#pragma once

#include <gmpxx.h>

#include <optional>

namespace pell::quadfield {

/// Exact element (u + v*sqrt(b))/denom of the real quadratic field Q(sqrt(b)),
/// denom in {1, 2}. Canonical form keeps denom = 2 only when u, v are both odd
/// (which requires b = 1 mod 4 for the element to be an algebraic integer).
class QuadElem {
public:
    QuadElem(mpz_class u, mpz_class v, unsigned denom, mpz_class b);

    static QuadElem integer(mpz_class n, mpz_class b) {
        return QuadElem(std::move(n), 0, 1, std::move(b));
    }

    const mpz_class& u() const { return u_; }
    const mpz_class& v() const { return v_; }
    unsigned denom() const { return denom_; }
    const mpz_class& b() const { return b_; }

    QuadElem conj() const { return QuadElem(u_, -v_, denom_, b_); }
    /// (u^2 - b v^2) / denom^2; exact integer for ring-of-integers elements.
    mpz_class norm() const;
    /// Requires |norm| = 1.
    QuadElem inverse() const;

    bool is_one() const { return denom_ == 1 && u_ == 1 && v_ == 0; }
    /// True when the element exceeds 1 (compares (u + v sqrt b) with denom).
    bool greater_than_one() const;

    friend QuadElem operator*(const QuadElem& a, const QuadElem& b);
    friend bool operator==(const QuadElem& a, const QuadElem& b) = default;

private:
    mpz_class u_, v_;
    unsigned denom_;
    mpz_class b_;
};

/// Minimal positive solution of z^2 - b x^2 = 1.
struct PellFundamental {
    mpz_class z1, x1, b;
};

/// Fundamental unit eps > 1 of the order Z[w], w = sqrt(b) for b != 1 mod 4
/// and w = (1+sqrt(b))/2 for b = 1 mod 4, via the periodic continued fraction
/// of w with exact integer recurrences. Rejects square b.
QuadElem fundamental_unit(const mpz_class& b);

/// Smallest power of the fundamental unit lying in Z[sqrt(b)] with norm +1.
PellFundamental pell_fundamental_solution(const mpz_class& b);

/// x_n = (eps^n - eps^-n)/(2 sqrt b) read off the exact power eps^n;
/// absent when the value is not a positive integer.
std::optional<mpz_class> candidate_from_power(const QuadElem& eps_power);

/// Iterative candidate generator: holds eps^n and multiplies by eps on
/// advance. Single-threaded cursor, one per verification.
class CandidateCursor {
public:
    explicit CandidateCursor(QuadElem eps) : eps_(eps), power_(std::move(eps)), n_(1) {}

    unsigned long n() const { return n_; }
    const QuadElem& power() const { return power_; }
    std::optional<mpz_class> x() const { return candidate_from_power(power_); }

    void advance() {
        power_ = power_ * eps_;
        ++n_;
    }

private:
    QuadElem eps_;
    QuadElem power_;
    unsigned long n_;
};

}  // namespace pell::quadfield
