#include "pell/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "pell/realcf.hpp"

namespace pell::verifier {

using arith::Budget;
using arith::Factorization;
using bounds::BoundSet;
using quadfield::CandidateCursor;
using quadfield::QuadElem;
using realcf::CertifiedReal;
using realcf::PrecisionPolicy;
using realcf::precision_exhausted;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Lazily extended cache of candidate values x_1, x_2, ...
class CandidateTable {
public:
    explicit CandidateTable(const QuadElem& eps) : cursor_(eps) {}

    const std::optional<mpz_class>& at(unsigned long n) {
        while (xs_.size() < n) {
            xs_.push_back(cursor_.x());
            cursor_.advance();
        }
        return xs_[n - 1];
    }

private:
    CandidateCursor cursor_;
    std::vector<std::optional<mpz_class>> xs_;
};

std::optional<std::string> skip_reason(const std::optional<mpz_class>& x,
                                       const mpz_class& b) {
    if (!x) return "non-integral";
    if ((*x) * (*x) <= 1 + b) return "below sqrt(1+b)";
    if (!arith::is_perfect_square(1 + b * (*x) * (*x))) return "1+b*x^2 not a square";
    return std::nullopt;
}

}  // namespace

std::string status_name(Status s) {
    switch (s) {
        case Status::unique_certified: return "unique_certified";
        case Status::pairs_found: return "pairs_found";
        case Status::not_certified: return "not_certified";
    }
    return "?";
}

std::vector<RecoveredCoeffs> recover_solutions(const mpz_class& b, const mpz_class& x,
                                               const mpz_class& x_prime,
                                               const Factorization& f,
                                               const Factorization& f_prime) {
    (void)f_prime;  // the ratio test already used it; recovery only needs f
    std::vector<RecoveredCoeffs> out;
    if (!f.complete()) return out;
    const mpz_class t = x_prime * x_prime - 1;
    const mpz_class z = arith::isqrt(1 + b * x * x);
    const mpz_class zp = arith::isqrt(1 + b * x_prime * x_prime);
    for (const mpz_class& d : arith::square_divisors(f)) {
        const mpz_class a = f.n / (d * d);
        if (a <= 1) continue;
        if (t % a != 0) continue;
        auto yp = arith::is_perfect_square(t / a);
        if (!yp) continue;
        out.push_back(RecoveredCoeffs{a, d, *yp, z, zp});
    }
    return out;
}

std::vector<std::pair<mpz_class, mpz_class>> brute_force_oracle(const mpz_class& b,
                                                                const mpz_class& x_max) {
    if (arith::is_perfect_square(b))
        throw std::invalid_argument("brute_force_oracle: b must not be a square");
    std::vector<std::pair<mpz_class, mpz_class>> scan;
    // direct scan, with a machine-word fast path
    if (b.fits_ulong_p() && x_max.fits_ulong_p() &&
        mpz_class(1 + b * x_max * x_max) < mpz_class("9223372036854775807")) {
        const std::uint64_t bb = b.get_ui(), xm = x_max.get_ui();
        for (std::uint64_t x = 1; x <= xm; ++x) {
            const std::uint64_t t = 1 + bb * x * x;
            std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(t)));
            while (r * r > t) --r;
            while ((r + 1) * (r + 1) <= t) ++r;
            if (r * r == t) scan.emplace_back(mpz_class(r), mpz_class(x));
        }
    } else {
        for (mpz_class x = 1; x <= x_max; ++x) {
            if (auto r = arith::is_perfect_square(1 + b * x * x))
                scan.emplace_back(*r, x);
        }
    }
    // independent route: recurrence from the minimal solution
    std::vector<std::pair<mpz_class, mpz_class>> rec;
    quadfield::PellFundamental fund = quadfield::pell_fundamental_solution(b);
    mpz_class z = fund.z1, x = fund.x1;
    while (x <= x_max) {
        rec.emplace_back(z, x);
        mpz_class nz = fund.z1 * z + b * fund.x1 * x;
        mpz_class nx = fund.z1 * x + fund.x1 * z;
        z = std::move(nz);
        x = std::move(nx);
    }
    if (scan != rec)
        throw std::logic_error("brute_force_oracle: scan and recurrence disagree");
    return scan;
}

VerificationReport verify_b(const mpz_class& b, const Config& cfg) {
    const auto t_total = Clock::now();
    VerificationReport r;
    r.b = b;
    if (b < 1) throw std::invalid_argument("verify_b: b must be >= 1");
    if (b == 1) {
        r.status = Status::unique_certified;
        r.reason = "b = 1: z^2 - x^2 = 1 has no positive solutions";
        r.timings_ms["total"] = ms_since(t_total);
        return r;
    }
    if (arith::is_perfect_square(b)) {
        r.status = Status::unique_certified;
        r.reason = "square radicand: no Pell solutions";
        r.timings_ms["total"] = ms_since(t_total);
        return r;
    }

    const PrecisionPolicy pol{cfg.precision_bits, cfg.precision_ceiling_bits};
    const Budget budget{cfg.factor_budget_ms, std::uint64_t{1} << 26};

    QuadElem eps = quadfield::fundamental_unit(b);
    r.epsilon = eps;

    auto t_bounds = Clock::now();
    std::optional<BoundSet> bs_opt;
    try {
        bs_opt = bounds::make_bound_set(b, eps, pol);
    } catch (const precision_exhausted& e) {
        r.status = Status::not_certified;
        r.reason = std::string("bound set: ") + e.what();
        r.timings_ms["total"] = ms_since(t_total);
        return r;
    }
    BoundSet& bs = *bs_opt;
    r.c_m = bs.c_m;
    r.c_n1 = bs.c_n1;
    r.witness_q = bs.cf_mu.convergents[bs.witness_index].second;
    r.timings_ms["bounds"] = ms_since(t_bounds);

    CertifiedReal log_eps = realcf::log_quad(eps, cfg.precision_bits);
    CandidateTable table(eps);
    bool certified = true;
    std::string fail_reason;

    const auto t_scan = Clock::now();
    unsigned long c_n1 = 0;
    if (bs.c_n1.fits_ulong_p() && bs.c_n1 > 0) c_n1 = bs.c_n1.get_ui();

    for (unsigned long n = 1; n <= c_n1 && certified; ++n) {
        const auto& x_opt = table.at(n);
        auto skip = skip_reason(x_opt, b);
        r.candidates.push_back(
            CandidateInfo{n, x_opt ? *x_opt : mpz_class(0), skip});
        if (skip) continue;

        const mpz_class& x = *x_opt;
        CertifiedReal log_g = realcf::log_gamma(x, cfg.precision_bits);
        Factorization f = arith::factorize_split(x - 1, x + 1, budget);
        const mpz_class pi = f.complete() ? arith::squarefree_part(f) : mpz_class(1);
        const mpz_class c_l = bounds::compute_c_l(log_g, pi);

        // reduce the n2-bound for every possible power l, keep the max
        mpz_class n2_max = 0;
        unsigned long c_l_u = c_l.fits_ulong_p() ? c_l.get_ui() : 0;
        if (c_l_u == 0) {
            certified = false;
            fail_reason = "c_l overflow";
            break;
        }
        for (unsigned long l = 1; l <= c_l_u; ++l) {
            const mpz_class c_n2_init =
                bounds::compute_c_n2_initial(l, bs.c_m, log_g, bs.c1, b, log_eps);
            const mpz_class big_n = mpz_class(l) * c_n2_init;
            bounds::ReductionProblem prob;
            prob.mu = [&](mpfr_prec_t p) {
                return realcf::log_quad(eps, p) / realcf::log_gamma(x, p);
            };
            prob.tau = [&, l](mpfr_prec_t p) {
                CertifiedReal lsb = CertifiedReal::exact_int(b, p).log() /
                                    CertifiedReal::exact_int(2, p);
                return -(CertifiedReal::exact_int(mpz_class(l), p) * lsb) /
                       realcf::log_gamma(x, p);
            };
            prob.prefactor = [&, l](mpfr_prec_t p) {
                mpq_class c = bs.c1 * bs.c1 * b + bs.c1;
                return CertifiedReal::exact_int(mpz_class(l), p) *
                       CertifiedReal::exact_ratio(c, p) / realcf::log_gamma(x, p);
            };
            prob.decay = [&, l](mpfr_prec_t p) {
                return CertifiedReal::exact_int(2, p) * realcf::log_quad(eps, p) /
                       CertifiedReal::exact_int(mpz_class(l), p);
            };
            prob.big_bound = big_n;
            // gamma_n = eps^n / sqrt(b) up to O(eps^-2n): ||q tau|| tracks
            // n ||q mu|| until q reaches ~ b gamma^2 = 4 b x^2, so the second
            // reduction hypothesis can only fire beyond that scale
            prob.stop_q = (4 * b * x * x) << 20;

            bounds::ReductionTrace trace;
            std::optional<mpz_class> reduced;
            bool red_failed = false;
            try {
                reduced = bounds::reduce_adaptive(prob, pol, &trace);
            } catch (const precision_exhausted&) {
                red_failed = true;
            }
            mpz_class n2_l;
            if (reduced) {
                n2_l = *reduced / l;  // the theorem bounds l*n2
                r.reductions.push_back(ReductionInfo{n, l, trace.q, trace.kappa, n2_l});
            } else {
                // fall back to the unreduced bound when it is still scannable
                n2_l = c_n2_init / l;
                r.reductions.push_back(
                    ReductionInfo{n, l, trace.q, trace.kappa, std::nullopt});
                if (red_failed || n2_l > cfg.scan_cap) {
                    certified = false;
                    fail_reason = "reduction failed for n=" + std::to_string(n) +
                                  " l=" + std::to_string(l);
                    break;
                }
            }
            n2_max = std::max(n2_max, n2_l);
        }
        if (!certified) break;
        if (n2_max > cfg.scan_cap) {
            certified = false;
            fail_reason = "second-solution scan exceeds cap";
            break;
        }

        // scan for a second solution sharing the same coefficient a
        const unsigned long n2_cap = n2_max.fits_ulong_p() ? n2_max.get_ui() : 0;
        const mpz_class xsq1 = x * x - 1;
        for (unsigned long np = n + 1; np <= n2_cap; ++np) {
            const auto& xp_opt = table.at(np);
            if (skip_reason(xp_opt, b)) continue;
            const mpz_class& xp = *xp_opt;
            if (!arith::rational_square_root(xp * xp - 1, xsq1)) continue;
            Factorization fp = arith::factorize_split(xp - 1, xp + 1, budget);
            SolutionPair pair;
            pair.n = n;
            pair.n_prime = np;
            pair.x = x;
            pair.x_prime = xp;
            pair.recovered = recover_solutions(b, x, xp, f, fp);
            pair.recovery_partial = !f.complete();
            r.pairs.push_back(std::move(pair));
        }
    }
    r.timings_ms["scan"] = ms_since(t_scan);

    if (!certified) {
        r.status = Status::not_certified;
        r.reason = fail_reason;
    } else if (!r.pairs.empty()) {
        r.status = Status::pairs_found;
    } else {
        r.status = Status::unique_certified;
    }
    r.timings_ms["total"] = ms_since(t_total);
    return r;
}

}  // namespace pell::verifier
