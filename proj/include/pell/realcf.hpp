#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pell/quadfield.hpp"

namespace pell::realcf {

/// Raised when the adaptive precision loop hits its configured ceiling.
struct precision_exhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Internal signal: the current enclosure is too wide to decide; callers
/// double the working precision and retry.
struct need_more_precision : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PrecisionPolicy {
    mpfr_prec_t initial = 192;
    mpfr_prec_t ceiling = 32768;
};

/// A closed interval [lo, hi] guaranteed to contain the exact real value.
/// All arithmetic rounds outward, so the containment survives every
/// operation.
class CertifiedReal {
public:
    explicit CertifiedReal(mpfr_prec_t prec);
    CertifiedReal(const CertifiedReal& o);
    CertifiedReal(CertifiedReal&& o) noexcept;
    CertifiedReal& operator=(CertifiedReal o) noexcept;
    ~CertifiedReal();

    static CertifiedReal exact_int(const mpz_class& n, mpfr_prec_t prec);
    static CertifiedReal exact_ratio(const mpq_class& q, mpfr_prec_t prec);
    static CertifiedReal from_double(double d, mpfr_prec_t prec);
    static CertifiedReal from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec);

    mpfr_prec_t precision() const { return prec_; }
    const mpfr_t& lo() const { return lo_; }
    const mpfr_t& hi() const { return hi_; }

    bool is_positive() const { return mpfr_sgn(lo_) > 0; }
    bool is_negative() const { return mpfr_sgn(hi_) < 0; }
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
    /// hi - lo < 2^-bits
    bool width_below_pow2(long bits) const;
    bool width_below(const mpq_class& w) const;

    /// floor is certain only when both endpoints agree on it
    std::optional<mpz_class> certified_floor() const;
    mpz_class floor_of_upper() const;
    mpz_class floor_of_lower() const;

    /// exact endpoints as rationals (for outward-rounded exports)
    mpq_class upper_rational() const;
    mpq_class lower_rational() const;

    double midpoint_d() const;
    double radius_d() const;
    std::string str(int digits = 20) const;

    friend CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b);
    friend CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b);
    friend CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b);
    friend CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b);
    friend CertifiedReal operator-(const CertifiedReal& a);

    CertifiedReal log() const;    // requires lo > 0
    CertifiedReal sqrt() const;   // requires lo >= 0
    CertifiedReal abs() const;

    /// comparisons certain across the whole enclosure
    bool surely_less(const CertifiedReal& o) const;
    bool surely_greater(const CertifiedReal& o) const;
    bool surely_greater(const mpq_class& q) const;
    bool surely_less(const mpq_class& q) const;

private:
    mpfr_t lo_, hi_;
    mpfr_prec_t prec_;
};

using RealFn = std::function<CertifiedReal(mpfr_prec_t)>;

/// Certified partial quotients and convergents of an irrational mu.
/// Every stored term is provably the true partial quotient: the floor at each
/// step was constant across the interval enclosure.
struct ContinuedFraction {
    std::vector<mpz_class> terms;                               // a_0 ... a_k
    std::vector<std::pair<mpz_class, mpz_class>> convergents;   // (p_i, q_i)
    mpfr_prec_t precision_bits = 0;

    std::size_t certified_upto() const { return terms.empty() ? 0 : terms.size() - 1; }
    /// max of a_1..a_l
    mpz_class max_partial_quotient(std::size_t l) const;
};

using StopFn = std::function<bool(std::size_t index, const mpz_class& q)>;

struct ExpandResult {
    ContinuedFraction cf;
    bool stopped = false;  // the stop predicate fired on a certified term
};

/// Single-shot expansion at the precision of mu; stops at the first
/// uncertifiable partial quotient, at max_terms, or when stop fires.
ExpandResult expand_cf_once(const CertifiedReal& mu, const StopFn& stop,
                            std::size_t max_terms);

/// Adaptive expansion: doubles the working precision (re-deriving mu through
/// make_mu) until the stop predicate fires on a certified term. Throws
/// precision_exhausted at the policy ceiling.
ContinuedFraction expand_cf(const RealFn& make_mu, const StopFn& stop,
                            std::size_t max_terms, const PrecisionPolicy& policy);

/// Legendre-type bound 1/((2+A) q_l) with A = max(a_1..a_l): every p/q with
/// q <= q_l keeps |p - q mu| above it. Requires 1 <= l <= certified_upto.
mpq_class legendre_lower_bound(const ContinuedFraction& cf, std::size_t l);

/// Certified enclosure of the distance from q*theta to the nearest integer.
/// Requires the enclosure of q*theta to be narrower than 1/4.
CertifiedReal dist_nearest_int(const mpz_class& q, const CertifiedReal& theta);

/// Certified log((u + v sqrt b)/denom); requires the element to exceed 1.
CertifiedReal log_quad(const quadfield::QuadElem& alpha, mpfr_prec_t prec);

/// Certified log(x + sqrt(x^2-1)) for integer x >= 2.
CertifiedReal log_gamma(const mpz_class& x, mpfr_prec_t prec);

}  // namespace pell::realcf
