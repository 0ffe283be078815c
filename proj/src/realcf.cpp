#include "pell/realcf.hpp"

#include <algorithm>
#include <cstdio>

namespace pell::realcf {

CertifiedReal::CertifiedReal(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

CertifiedReal::CertifiedReal(const CertifiedReal& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

CertifiedReal::CertifiedReal(CertifiedReal&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

CertifiedReal& CertifiedReal::operator=(CertifiedReal o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    std::swap(prec_, o.prec_);
    return *this;
}

CertifiedReal::~CertifiedReal() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

CertifiedReal CertifiedReal::exact_int(const mpz_class& n, mpfr_prec_t prec) {
    CertifiedReal r(prec);
    mpfr_set_z(r.lo_, n.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, n.get_mpz_t(), MPFR_RNDU);
    return r;
}

CertifiedReal CertifiedReal::exact_ratio(const mpq_class& q, mpfr_prec_t prec) {
    CertifiedReal r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
}

CertifiedReal CertifiedReal::from_double(double d, mpfr_prec_t prec) {
    CertifiedReal r(prec);
    mpfr_set_d(r.lo_, d, MPFR_RNDD);
    mpfr_set_d(r.hi_, d, MPFR_RNDU);
    return r;
}

CertifiedReal CertifiedReal::from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi,
                                            mpfr_prec_t prec) {
    CertifiedReal r(prec);
    mpfr_set(r.lo_, lo, MPFR_RNDD);
    mpfr_set(r.hi_, hi, MPFR_RNDU);
    return r;
}

bool CertifiedReal::width_below_pow2(long bits) const {
    mpfr_t w;
    mpfr_init2(w, prec_);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    const bool ok = mpfr_cmp_ui_2exp(w, 1, -bits) < 0;
    mpfr_clear(w);
    return ok;
}

bool CertifiedReal::width_below(const mpq_class& wmax) const {
    mpfr_t w;
    mpfr_init2(w, prec_);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    const bool ok = mpfr_cmp_q(w, wmax.get_mpq_t()) < 0;
    mpfr_clear(w);
    return ok;
}

std::optional<mpz_class> CertifiedReal::certified_floor() const {
    mpz_class fl = floor_of_lower(), fh = floor_of_upper();
    if (fl != fh) return std::nullopt;
    return fl;
}

mpz_class CertifiedReal::floor_of_upper() const {
    mpfr_t t;
    mpfr_init2(t, prec_);
    mpfr_floor(t, hi_);
    mpz_class out;
    mpfr_get_z(out.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    return out;
}

mpz_class CertifiedReal::floor_of_lower() const {
    mpfr_t t;
    mpfr_init2(t, prec_);
    mpfr_floor(t, lo_);
    mpz_class out;
    mpfr_get_z(out.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    return out;
}

mpq_class CertifiedReal::upper_rational() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), hi_);
    return q;
}

mpq_class CertifiedReal::lower_rational() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), lo_);
    return q;
}

double CertifiedReal::midpoint_d() const {
    return (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN)) / 2;
}

double CertifiedReal::radius_d() const {
    mpfr_t w;
    mpfr_init2(w, prec_);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    const double r = mpfr_get_d(w, MPFR_RNDU) / 2;
    mpfr_clear(w);
    return r;
}

std::string CertifiedReal::str(int digits) const {
    char buf[128];
    mpfr_t mid;
    mpfr_init2(mid, prec_);
    mpfr_add(mid, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
    mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, mid);
    mpfr_clear(mid);
    return buf;
}

CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b) {
    CertifiedReal r(std::max(a.prec_, b.prec_));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b) {
    CertifiedReal r(std::max(a.prec_, b.prec_));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
}

CertifiedReal operator-(const CertifiedReal& a) {
    CertifiedReal r(a.prec_);
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
}

CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b) {
    const mpfr_prec_t prec = std::max(a.prec_, b.prec_);
    CertifiedReal r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    const mpfr_srcptr as[2] = {a.lo_, a.hi_};
    const mpfr_srcptr bs[2] = {b.lo_, b.hi_};
    bool first = true;
    for (auto x : as)
        for (auto y : bs) {
            mpfr_mul(t, x, y, MPFR_RNDD);
            if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, x, y, MPFR_RNDU);
            if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b) {
    if (b.contains_zero())
        throw need_more_precision("interval division: divisor encloses zero");
    const mpfr_prec_t prec = std::max(a.prec_, b.prec_);
    CertifiedReal inv(prec);
    if (b.is_positive()) {
        mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
        mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
    } else {
        mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
        mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
    }
    return a * inv;
}

CertifiedReal CertifiedReal::log() const {
    if (mpfr_sgn(lo_) <= 0)
        throw std::domain_error("CertifiedReal::log: enclosure not strictly positive");
    CertifiedReal r(prec_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

CertifiedReal CertifiedReal::sqrt() const {
    if (mpfr_sgn(lo_) < 0)
        throw std::domain_error("CertifiedReal::sqrt: negative enclosure");
    CertifiedReal r(prec_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

CertifiedReal CertifiedReal::abs() const {
    CertifiedReal r(prec_);
    if (mpfr_sgn(lo_) >= 0) return *this;
    if (mpfr_sgn(hi_) <= 0) return -*this;
    // straddles zero
    mpfr_set_zero(r.lo_, 1);
    mpfr_t t;
    mpfr_init2(t, prec_);
    mpfr_neg(t, lo_, MPFR_RNDU);
    if (mpfr_cmp(t, hi_) > 0)
        mpfr_set(r.hi_, t, MPFR_RNDU);
    else
        mpfr_set(r.hi_, hi_, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

bool CertifiedReal::surely_less(const CertifiedReal& o) const {
    return mpfr_cmp(hi_, o.lo_) < 0;
}

bool CertifiedReal::surely_greater(const CertifiedReal& o) const {
    return mpfr_cmp(lo_, o.hi_) > 0;
}

bool CertifiedReal::surely_greater(const mpq_class& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) > 0;
}

bool CertifiedReal::surely_less(const mpq_class& q) const {
    return mpfr_cmp_q(hi_, q.get_mpq_t()) < 0;
}

mpz_class ContinuedFraction::max_partial_quotient(std::size_t l) const {
    if (l < 1 || l >= terms.size())
        throw std::invalid_argument("max_partial_quotient: index out of certified range");
    mpz_class a = terms[1];
    for (std::size_t j = 2; j <= l; ++j) a = std::max(a, terms[j]);
    return a;
}

ExpandResult expand_cf_once(const CertifiedReal& mu, const StopFn& stop,
                            std::size_t max_terms) {
    ExpandResult out;
    out.cf.precision_bits = mu.precision();
    CertifiedReal x = mu;
    mpz_class pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;
    for (std::size_t i = 0; i < max_terms; ++i) {
        auto a = x.certified_floor();
        if (!a) return out;  // ambiguity: certification stops here
        mpz_class p = *a * pm1 + pm2;
        mpz_class q = *a * qm1 + qm2;
        out.cf.terms.push_back(*a);
        out.cf.convergents.emplace_back(p, q);
        if (i >= 1 && stop(i, q)) {
            out.stopped = true;
            return out;
        }
        // next complete quotient 1 / (x - a); frac must be surely positive
        CertifiedReal frac = x - CertifiedReal::exact_int(*a, mu.precision());
        if (!frac.is_positive()) return out;
        try {
            x = CertifiedReal::exact_int(1, mu.precision()) / frac;
        } catch (const need_more_precision&) {
            return out;
        }
        pm2 = std::move(pm1);
        pm1 = std::move(p);
        qm2 = std::move(qm1);
        qm1 = std::move(q);
    }
    return out;
}

ContinuedFraction expand_cf(const RealFn& make_mu, const StopFn& stop,
                            std::size_t max_terms, const PrecisionPolicy& policy) {
    for (mpfr_prec_t prec = policy.initial; prec <= policy.ceiling; prec *= 2) {
        CertifiedReal mu = make_mu(prec);
        ExpandResult res = expand_cf_once(mu, stop, max_terms);
        if (res.stopped) return std::move(res.cf);
        if (res.cf.terms.size() >= max_terms) return std::move(res.cf);
    }
    throw precision_exhausted("expand_cf: precision ceiling reached without certification");
}

mpq_class legendre_lower_bound(const ContinuedFraction& cf, std::size_t l) {
    if (l < 1) throw std::invalid_argument("legendre_lower_bound: l must be >= 1");
    if (l >= cf.terms.size())
        throw std::invalid_argument("legendre_lower_bound: uncertified index");
    const mpz_class A = cf.max_partial_quotient(l);
    mpq_class bound(1, 1);
    bound /= mpq_class((2 + A) * cf.convergents[l].second);
    bound.canonicalize();
    return bound;
}

CertifiedReal dist_nearest_int(const mpz_class& q, const CertifiedReal& theta) {
    const mpfr_prec_t prec = theta.precision();
    CertifiedReal t = CertifiedReal::exact_int(q, prec) * theta;
    if (!t.width_below(mpq_class(1, 4)))
        throw need_more_precision("dist_nearest_int: enclosure wider than 1/4");
    // nearest integer to the midpoint
    mpfr_t mid;
    mpfr_init2(mid, prec);
    mpfr_add(mid, t.lo(), t.hi(), MPFR_RNDN);
    mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
    mpfr_round(mid, mid);
    mpz_class m;
    mpfr_get_z(m.get_mpz_t(), mid, MPFR_RNDN);
    mpfr_clear(mid);
    CertifiedReal d = (t - CertifiedReal::exact_int(m, prec)).abs();
    // fold |t - m| into [0, 1/2]: ||t|| = min(|t-m|, 1 - |t-m|)
    mpfr_t half, lo, hi;
    mpfr_init2(half, prec);
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    mpfr_set_d(half, 0.5, MPFR_RNDN);  // exact
    if (mpfr_cmp(d.hi(), half) <= 0) {
        mpfr_clear(half);
        mpfr_clear(lo);
        mpfr_clear(hi);
        return d;
    }
    CertifiedReal alt = CertifiedReal::exact_int(1, prec) - d;
    mpfr_set(lo, mpfr_cmp(d.lo(), alt.lo()) < 0 ? d.lo() : alt.lo(), MPFR_RNDD);
    if (mpfr_sgn(lo) < 0) mpfr_set_zero(lo, 1);
    mpfr_set(hi, mpfr_cmp(d.hi(), half) < 0 ? d.hi() : half, MPFR_RNDU);
    CertifiedReal r = CertifiedReal::from_endpoints(lo, hi, prec);
    mpfr_clear(half);
    mpfr_clear(lo);
    mpfr_clear(hi);
    return r;
}

CertifiedReal log_quad(const quadfield::QuadElem& alpha, mpfr_prec_t prec) {
    CertifiedReal u = CertifiedReal::exact_int(alpha.u(), prec);
    CertifiedReal v = CertifiedReal::exact_int(alpha.v(), prec);
    CertifiedReal rootb = CertifiedReal::exact_int(alpha.b(), prec).sqrt();
    CertifiedReal val = u + v * rootb;
    if (alpha.denom() == 2)
        val = val / CertifiedReal::exact_int(2, prec);
    if (!val.surely_greater(mpq_class(1)))
        throw std::domain_error("log_quad: element must exceed 1");
    return val.log();
}

CertifiedReal log_gamma(const mpz_class& x, mpfr_prec_t prec) {
    if (x < 2) throw std::invalid_argument("log_gamma: x must be >= 2");
    CertifiedReal xr = CertifiedReal::exact_int(x, prec);
    CertifiedReal root = CertifiedReal::exact_int(x * x - 1, prec).sqrt();
    return (xr + root).log();
}

}  // namespace pell::realcf
