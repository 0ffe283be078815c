#include "pell/bounds.hpp"

#include <algorithm>
#include <stdexcept>

#include "pell/arith.hpp"

namespace pell::bounds {

using realcf::need_more_precision;
using realcf::precision_exhausted;

namespace {

CertifiedReal euler_e(mpfr_prec_t prec) {
    mpfr_t lo, hi, one;
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    mpfr_init2(one, prec);
    mpfr_set_ui(one, 1, MPFR_RNDN);
    mpfr_exp(lo, one, MPFR_RNDD);
    mpfr_exp(hi, one, MPFR_RNDU);
    CertifiedReal r = CertifiedReal::from_endpoints(lo, hi, prec);
    mpfr_clear(lo);
    mpfr_clear(hi);
    mpfr_clear(one);
    return r;
}

CertifiedReal log_sqrt(const mpz_class& b, mpfr_prec_t prec) {
    return CertifiedReal::exact_int(b, prec).log() /
           CertifiedReal::exact_int(2, prec);
}

/// K = c_mat * 16^2 * log(eps) * log(sqrt b)
CertifiedReal matveev_coefficient(const mpz_class& b, const quadfield::QuadElem& eps,
                                  mpfr_prec_t prec) {
    return compute_c_mat(prec) * CertifiedReal::exact_int(256, prec) *
           realcf::log_quad(eps, prec) * log_sqrt(b, prec);
}

/// C = 6e log(6e)
CertifiedReal six_e_log(mpfr_prec_t prec) {
    CertifiedReal six_e = CertifiedReal::exact_int(6, prec) * euler_e(prec);
    return six_e * six_e.log();
}

}  // namespace

mpq_class compute_c1(const mpz_class& b, const quadfield::QuadElem& eps) {
    const mpfr_prec_t prec = 128;
    CertifiedReal eps_iv = CertifiedReal::exact_int(eps.u(), prec) +
                           CertifiedReal::exact_int(eps.v(), prec) *
                               CertifiedReal::exact_int(eps.b(), prec).sqrt();
    if (eps.denom() == 2) eps_iv = eps_iv / CertifiedReal::exact_int(2, prec);
    CertifiedReal tail =
        CertifiedReal::exact_int(1, prec) /
        (CertifiedReal::exact_int(2 * b, prec) * eps_iv);
    mpq_class c1 = 1 + mpq_class(1, 4) / mpq_class(b) + tail.upper_rational();
    c1.canonicalize();
    return c1;
}

CertifiedReal compute_c_mat(mpfr_prec_t prec) {
    CertifiedReal e = euler_e(prec);
    CertifiedReal e4 = e * e * e * e;
    CertifiedReal coeff =
        CertifiedReal::exact_ratio(mpq_class(45) * 1048576 / 4, prec);
    CertifiedReal four_e = CertifiedReal::exact_int(4, prec) * e;
    CertifiedReal bracket =
        CertifiedReal::exact_ratio(mpq_class(105, 4), prec) +
        (CertifiedReal::exact_int(16, prec) * four_e.log()).log();
    return coeff * e4 * bracket;
}

CertifiedReal exponent_gap(const mpz_class& b, const quadfield::QuadElem& eps,
                           const mpz_class& m, mpfr_prec_t prec) {
    CertifiedReal K = matveev_coefficient(b, eps, prec);
    CertifiedReal arg = six_e_log(prec) *
                        (CertifiedReal::exact_int(m, prec) +
                         CertifiedReal::exact_ratio(mpq_class(13, 25), prec));
    return CertifiedReal::exact_int(2 * m, prec) -
           CertifiedReal::exact_ratio(mpq_class(39, 100), prec) - K * arg.log();
}

mpz_class compute_c_m(const mpz_class& b, const quadfield::QuadElem& eps,
                      const PrecisionPolicy& policy) {
    for (mpfr_prec_t prec = policy.initial; prec <= policy.ceiling; prec *= 2) {
        try {
            CertifiedReal K = matveev_coefficient(b, eps, prec);
            auto gap = [&](const mpz_class& m) { return exponent_gap(b, eps, m, prec); };
            // restrict to the region where f is increasing: m + 0.52 > K/2
            mpz_class lo =
                (K / CertifiedReal::exact_int(2, prec)).floor_of_upper() + 1;
            if (lo < 1) lo = 1;
            mpz_class hi = lo + 1;
            int doublings = 0;
            while (!gap(hi).is_positive()) {
                hi *= 2;
                if (++doublings > 200)
                    throw need_more_precision("compute_c_m: no positive bracket");
            }
            if (gap(lo).is_positive()) return lo;
            while (lo + 1 < hi) {
                mpz_class mid = (lo + hi) / 2;
                if (gap(mid).is_positive())
                    hi = mid;
                else
                    lo = mid;
            }
            return hi;
        } catch (const need_more_precision&) {
            continue;
        }
    }
    // the closed-form bound always succeeds
    return compute_c_m_fallback(b, eps, policy.initial);
}

mpz_class compute_c_m_fallback(const mpz_class& b, const quadfield::QuadElem& eps,
                               mpfr_prec_t prec) {
    // From 2m - 0.39 < K log(C (m+0.52)) and log(C(m+0.52)) <= (1 + log C) log m
    // for m >= e: m < c log m with c = (K (1 + log C) + 1)/2, so m < 2c log c.
    CertifiedReal K = matveev_coefficient(b, eps, prec);
    CertifiedReal C = six_e_log(prec);
    CertifiedReal c =
        (K * (CertifiedReal::exact_int(1, prec) + C.log()) +
         CertifiedReal::exact_int(1, prec)) /
        CertifiedReal::exact_int(2, prec);
    CertifiedReal bound = CertifiedReal::exact_int(2, prec) * c * c.log();
    return bound.floor_of_upper() + 1;
}

BoundSet make_bound_set(const mpz_class& b, const quadfield::QuadElem& eps,
                        const PrecisionPolicy& policy) {
    mpq_class c1 = compute_c1(b, eps);
    mpz_class c_m = compute_c_m(b, eps, policy);

    auto make_mu = [&](mpfr_prec_t prec) {
        return log_sqrt(b, prec) / realcf::log_quad(eps, prec);
    };
    // golden-ratio growth caps the number of convergents needed for q_k >= c_m
    const std::size_t bits = mpz_sizeinbase(c_m.get_mpz_t(), 2);
    const std::size_t max_terms = static_cast<std::size_t>(bits * 1.45) + 4;
    ContinuedFraction cf = realcf::expand_cf(
        make_mu, [&](std::size_t, const mpz_class& q) { return q >= c_m; },
        max_terms, policy);

    std::size_t witness = 0;
    for (std::size_t k = 1; k < cf.convergents.size(); ++k) {
        if (cf.convergents[k].second >= c_m) {
            witness = k;
            break;
        }
    }
    if (witness == 0)
        throw precision_exhausted("make_bound_set: no certified convergent with q_k >= c_m");
    mpz_class A = cf.max_partial_quotient(witness);

    const mpfr_prec_t prec = policy.initial;
    CertifiedReal log_eps = realcf::log_quad(eps, prec);
    mpq_class c1sq = c1 * c1 * b + c1;
    CertifiedReal c0 = CertifiedReal::exact_int(c_m, prec) *
                       CertifiedReal::exact_ratio(c1sq, prec) / log_eps;
    CertifiedReal numer =
        CertifiedReal::exact_int(cf.convergents[witness].second, prec).log() +
        c0.log() + CertifiedReal::exact_int(2 + A, prec).log();
    CertifiedReal ratio =
        numer / (CertifiedReal::exact_int(2, prec) * log_eps);
    mpz_class c_n1 = ratio.floor_of_upper();

    return BoundSet{b, eps, std::move(c1), std::move(c_m), std::move(c_n1),
                    std::move(cf), witness, std::move(A)};
}

mpz_class compute_c_l(const CertifiedReal& log_gamma, const mpz_class& pi) {
    if (pi < 1) throw std::invalid_argument("compute_c_l: Pi must be >= 1");
    const mpfr_prec_t prec = log_gamma.precision();
    // log(2 sqrt Pi) = log(4 Pi)/2
    CertifiedReal denom = CertifiedReal::exact_int(4 * pi, prec).log() /
                          CertifiedReal::exact_int(2, prec);
    mpz_class c_l = (log_gamma / denom).floor_of_upper();
    return c_l < 1 ? mpz_class(1) : c_l;
}

mpz_class compute_c_n2_initial(unsigned long l, const mpz_class& c_m,
                               const CertifiedReal& log_gamma, const mpq_class& c1,
                               const mpz_class& b, const CertifiedReal& log_eps) {
    const mpfr_prec_t prec = log_gamma.precision();
    // log(c1 sqrt b) = log(c1^2 b)/2
    mpq_class c1sqb = c1 * c1 * b;
    CertifiedReal log_c1sb = CertifiedReal::exact_ratio(c1sqb, prec).log() /
                             CertifiedReal::exact_int(2, prec);
    CertifiedReal numer = CertifiedReal::exact_int(c_m, prec) * log_gamma +
                          CertifiedReal::exact_int(mpz_class(l), prec) * log_c1sb;
    return (numer / log_eps).floor_of_upper();
}

std::optional<mpz_class> baker_davenport_reduce(const ReductionInstance& inst,
                                                const ContinuedFraction& cf,
                                                ReductionTrace* trace) {
    const mpfr_prec_t prec = inst.mu.precision();
    const mpz_class& N = inst.big_bound;
    if (N < 1) throw std::invalid_argument("baker_davenport_reduce: N must be >= 1");
    CertifiedReal one = CertifiedReal::exact_int(1, prec);
    CertifiedReal twoN = CertifiedReal::exact_int(2 * N, prec);
    bool ambiguous = false;

    for (std::size_t k = 1; k < cf.convergents.size(); ++k) {
        const mpz_class& q = cf.convergents[k].second;
        CertifiedReal d1(prec), d2(prec);
        try {
            d1 = realcf::dist_nearest_int(q, inst.mu);
        } catch (const need_more_precision&) {
            ambiguous = true;
            break;  // wider q only gets worse at this precision
        }
        if (!d1.is_positive()) {
            ambiguous = true;
            continue;
        }
        CertifiedReal kappa_iv = one / (twoN * d1);
        // chosen kappa: strictly below the certain value 1/(2N ||q mu||)
        mpfr_t kap;
        mpfr_init2(kap, prec);
        mpfr_set(kap, kappa_iv.lo(), MPFR_RNDD);
        mpfr_mul_d(kap, kap, 1.0 - 1.0 / (1 << 20), MPFR_RNDD);
        CertifiedReal kappa = CertifiedReal::from_endpoints(kap, kap, prec);
        const bool kappa_above_one = mpfr_cmp_ui(kap, 1) > 0;
        mpfr_clear(kap);
        if (!kappa_above_one) {
            if (!kappa_iv.surely_less(mpq_class(1))) ambiguous = true;
            continue;
        }
        // first hypothesis, strict: kappa * 2N * ||q mu|| < 1
        if (!(kappa * twoN * d1).surely_less(mpq_class(1))) {
            ambiguous = true;
            continue;
        }
        try {
            d2 = realcf::dist_nearest_int(q, inst.tau);
        } catch (const need_more_precision&) {
            ambiguous = true;
            break;
        }
        // second hypothesis: kappa * ||q tau|| > 1
        if (!(kappa * d2).surely_greater(mpq_class(1))) {
            if (!(kappa_iv * d2).surely_less(mpq_class(1))) ambiguous = true;
            continue;
        }
        CertifiedReal arg = CertifiedReal::exact_int(2 * q, prec) * kappa *
                            inst.prefactor;
        mpz_class reduced = (arg.log() / inst.decay).floor_of_upper();
        if (trace) {
            trace->convergent_index = k;
            trace->q = q;
            trace->kappa = kappa.str(12);
        }
        if (reduced >= N) return std::nullopt;  // reduction did not help
        return reduced;
    }
    if (ambiguous)
        throw need_more_precision("baker_davenport_reduce: enclosures too wide");
    return std::nullopt;
}

std::optional<mpz_class> reduce_adaptive(const ReductionProblem& prob,
                                         const PrecisionPolicy& policy,
                                         ReductionTrace* trace) {
    const mpz_class threshold = std::max(mpz_class(prob.big_bound << 18), prob.stop_q);
    const std::size_t bits = mpz_sizeinbase(threshold.get_mpz_t(), 2);
    const std::size_t max_terms = static_cast<std::size_t>(bits * 1.45) + 8;

    for (mpfr_prec_t prec = policy.initial; prec <= policy.ceiling; prec *= 2) {
        CertifiedReal mu = prob.mu(prec);
        realcf::ExpandResult res = realcf::expand_cf_once(
            mu, [&](std::size_t, const mpz_class& q) { return q >= threshold; },
            max_terms);
        ReductionInstance inst{mu, prob.tau(prec), prob.prefactor(prec),
                               prob.decay(prec), prob.big_bound};
        try {
            auto out = baker_davenport_reduce(inst, res.cf, trace);
            if (!out && !res.stopped && res.cf.terms.size() < max_terms)
                continue;  // ran out of certified convergents, not of convergents
            return out;
        } catch (const need_more_precision&) {
            continue;
        }
    }
    throw precision_exhausted("reduce_adaptive: precision ceiling reached");
}

}  // namespace pell::bounds
