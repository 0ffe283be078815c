#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>

#include "pell/quadfield.hpp"
#include "pell/realcf.hpp"

namespace pell::bounds {

using realcf::CertifiedReal;
using realcf::ContinuedFraction;
using realcf::PrecisionPolicy;
using realcf::RealFn;

/// Rational upper bound for 1 + 1/(4b) + 1/(2 b eps).
mpq_class compute_c1(const mpz_class& b, const quadfield::QuadElem& eps);

/// Upper enclosure of (45*16^5/4) e^4 (26.25 + log(16 log(4e))).
CertifiedReal compute_c_mat(mpfr_prec_t prec);

/// Enclosure of f(m) = 2m - 0.39 - K log(6e log(6e) (m + 0.52)) with
/// K = c_mat * 16^2 * log(eps) * log(sqrt b). Exposed so tests can check the
/// bracketing of the returned bound.
CertifiedReal exponent_gap(const mpz_class& b, const quadfield::QuadElem& eps,
                           const mpz_class& m, mpfr_prec_t prec);

/// Smallest certified M such that f(m) > 0 for all m >= M, i.e. an upper
/// bound on every exponent m compatible with the Matveev-derived inequality.
/// Falls back to the closed-form 2c log c bound on numeric difficulty.
mpz_class compute_c_m(const mpz_class& b, const quadfield::QuadElem& eps,
                      const PrecisionPolicy& policy);

/// The closed-form fallback bound (always valid, usually coarser).
mpz_class compute_c_m_fallback(const mpz_class& b, const quadfield::QuadElem& eps,
                               mpfr_prec_t prec);

/// All per-b constants needed before the candidate scan.
struct BoundSet {
    mpz_class b;
    quadfield::QuadElem epsilon;
    mpq_class c1;
    mpz_class c_m;
    mpz_class c_n1;
    ContinuedFraction cf_mu;      // continued fraction of log(sqrt b)/log(eps)
    std::size_t witness_index;    // first k with q_k >= c_m
    mpz_class witness_A;          // max(a_1..a_k)
};

BoundSet make_bound_set(const mpz_class& b, const quadfield::QuadElem& eps,
                        const PrecisionPolicy& policy);

/// floor(log(gamma) / log(2 sqrt Pi)) with outward rounding, at least 1.
mpz_class compute_c_l(const CertifiedReal& log_gamma, const mpz_class& pi);

/// floor((c_m log gamma + l log(c1 sqrt b)) / log eps), outward; bounds l*n2.
mpz_class compute_c_n2_initial(unsigned long l, const mpz_class& c_m,
                               const CertifiedReal& log_gamma, const mpq_class& c1,
                               const mpz_class& b, const CertifiedReal& log_eps);

/// |n mu + tau - x| < prefactor * exp(-decay n), n <= big_bound.
struct ReductionInstance {
    CertifiedReal mu;
    CertifiedReal tau;
    CertifiedReal prefactor;
    CertifiedReal decay;
    mpz_class big_bound;  // N
};

struct ReductionTrace {
    std::size_t convergent_index = 0;
    mpz_class q;
    std::string kappa;
};

/// Iterates the convergents of mu; at the first one where kappa > 1 and
/// kappa ||q tau|| > 1 returns floor(log(2 kappa q prefactor)/decay) as the
/// new bound on n. Absent when every certified convergent fails or the
/// reduced bound would not beat big_bound. Throws need_more_precision when
/// the failure could be an artifact of enclosure width.
std::optional<mpz_class> baker_davenport_reduce(const ReductionInstance& inst,
                                               const ContinuedFraction& cf,
                                               ReductionTrace* trace = nullptr);

/// Precision-adaptive front end: derives the instance and the expansion of mu
/// at doubling precisions until the reduction decides one way or the other.
struct ReductionProblem {
    RealFn mu;
    RealFn tau;
    RealFn prefactor;
    RealFn decay;
    mpz_class big_bound;
    /// Convergent denominators are iterated until at least this size (when
    /// nonzero). Useful when tau is a near-integer combination of mu whose
    /// residual only decouples at a known large scale.
    mpz_class stop_q = 0;
};

std::optional<mpz_class> reduce_adaptive(const ReductionProblem& prob,
                                         const PrecisionPolicy& policy,
                                         ReductionTrace* trace = nullptr);

}  // namespace pell::bounds
