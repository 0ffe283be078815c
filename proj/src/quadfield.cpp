#include "pell/quadfield.hpp"

#include <map>
#include <stdexcept>
#include <utility>

#include "pell/arith.hpp"

namespace pell::quadfield {

QuadElem::QuadElem(mpz_class u, mpz_class v, unsigned denom, mpz_class b)
    : u_(std::move(u)), v_(std::move(v)), denom_(denom), b_(std::move(b)) {
    if (denom_ != 1 && denom_ != 2 && denom_ != 4)
        throw std::invalid_argument("QuadElem: denom must be 1, 2 or 4");
    while (denom_ > 1 && u_ % 2 == 0 && v_ % 2 == 0) {
        u_ /= 2;
        v_ /= 2;
        denom_ /= 2;
    }
    if (denom_ == 4)
        throw std::invalid_argument("QuadElem: not an element of the order");
    if (denom_ == 2 && ((u_ - v_) % 2 != 0))
        throw std::invalid_argument("QuadElem: half coordinates must share parity");
}

mpz_class QuadElem::norm() const {
    mpz_class num = u_ * u_ - b_ * v_ * v_;
    const mpz_class d2 = mpz_class(denom_) * denom_;
    if (num % d2 != 0)
        throw std::logic_error("QuadElem::norm: non-integral norm");
    return num / d2;
}

QuadElem QuadElem::inverse() const {
    const mpz_class nrm = norm();
    if (nrm == 1) return conj();
    if (nrm == -1) {
        QuadElem c = conj();
        return QuadElem(-c.u(), -c.v(), c.denom(), b_);
    }
    throw std::invalid_argument("QuadElem::inverse: not a unit");
}

bool QuadElem::greater_than_one() const {
    // u + v sqrt(b) > denom, with sqrt(b) compared exactly through squares
    const mpz_class rhs = mpz_class(denom_) - u_;
    if (v_ >= 0) {
        if (rhs < 0) return true;       // u > denom already
        if (v_ == 0) return false;
        return b_ * v_ * v_ > rhs * rhs;  // both sides non-negative
    }
    if (rhs >= 0) return false;
    return b_ * v_ * v_ < rhs * rhs;
}

QuadElem operator*(const QuadElem& a, const QuadElem& b) {
    if (a.b_ != b.b_)
        throw std::invalid_argument("QuadElem: mismatched radicand");
    mpz_class u = a.u_ * b.u_ + a.b_ * a.v_ * b.v_;
    mpz_class v = a.u_ * b.v_ + a.v_ * b.u_;
    return QuadElem(std::move(u), std::move(v), a.denom_ * b.denom_, a.b_);
}

QuadElem fundamental_unit(const mpz_class& b) {
    if (b < 2) throw std::invalid_argument("fundamental_unit: b must be >= 2");
    if (arith::is_perfect_square(b))
        throw std::invalid_argument("fundamental_unit: b must not be a square");

    const mpz_class root = arith::isqrt(b);
    const bool half = (b % 4 == 1);
    // complete quotients w_i = (P_i + sqrt(b)) / Q_i
    mpz_class P = half ? 1 : 0;
    mpz_class Q = half ? 2 : 1;

    std::map<std::pair<mpz_class, mpz_class>, std::size_t> seen;
    std::vector<std::pair<mpz_class, mpz_class>> quots;
    std::size_t cycle_start = 0;
    while (true) {
        auto key = std::make_pair(P, Q);
        if (auto it = seen.find(key); it != seen.end()) {
            cycle_start = it->second;
            break;
        }
        seen.emplace(key, quots.size());
        quots.push_back(key);
        mpz_class a = (P + root) / Q;
        P = a * Q - P;
        Q = (b - P * P) / Q;
    }

    // unit = product of the complete quotients over one full period
    mpz_class U = 1, V = 0, D = 1;
    for (std::size_t i = cycle_start; i < quots.size(); ++i) {
        const auto& [p, q] = quots[i];
        mpz_class nu = U * p + V * b;
        mpz_class nv = V * p + U;
        U = std::move(nu);
        V = std::move(nv);
        D *= q;
    }
    mpz_class u2 = 2 * U, v2 = 2 * V;
    if (u2 % D != 0 || v2 % D != 0)
        throw std::logic_error("fundamental_unit: period product not in the order");
    QuadElem eps(u2 / D, v2 / D, 2, b);
    const mpz_class nrm = eps.norm();
    if (nrm != 1 && nrm != -1)
        throw std::logic_error("fundamental_unit: period product is not a unit");
    if (!eps.greater_than_one())
        throw std::logic_error("fundamental_unit: unit not > 1");
    return eps;
}

PellFundamental pell_fundamental_solution(const mpz_class& b) {
    const QuadElem eps = fundamental_unit(b);
    QuadElem pw = eps;
    for (int k = 1; k <= 6; ++k) {
        if (pw.denom() == 1 && pw.norm() == 1)
            return PellFundamental{pw.u(), pw.v(), b};
        pw = pw * eps;
    }
    throw std::logic_error("pell_fundamental_solution: no norm-1 power within eps^6");
}

std::optional<mpz_class> candidate_from_power(const QuadElem& eps_power) {
    // eps^n = (u + v sqrt b)/d with norm N = +-1; eps^-n = N (u - v sqrt b)/d.
    // N = +1: (eps^n - eps^-n)/(2 sqrt b) = v/d.  N = -1: the value is u/(d sqrt b),
    // irrational for u != 0.
    if (eps_power.norm() != 1) return std::nullopt;
    if (eps_power.denom() == 2) {
        if (eps_power.v() % 2 != 0) return std::nullopt;
        // canonical form would have reduced an even/even pair, so v odd here
        return eps_power.v() / 2;
    }
    if (eps_power.v() <= 0) return std::nullopt;
    return eps_power.v();
}

}  // namespace pell::quadfield
