#pragma once

#include "perfhom/rational.hpp"

#include <mpfr.h>

#include <functional>
#include <utility>

namespace perfhom {

// Thin RAII wrapper over mpfr_t; every operation rounds to nearest at the
// target's precision, so error per op is <= 1/2 ulp.
class Real {
public:
    explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }
    Real(const Real& o) { mpfr_init2(x_, mpfr_get_prec(o.x_)); mpfr_set(x_, o.x_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(x_, 64); mpfr_swap(x_, o.x_); }
    Real& operator=(Real o) { mpfr_swap(x_, o.x_); return *this; }
    ~Real() { mpfr_clear(x_); }

    static Real of(unsigned long v, mpfr_prec_t prec) { Real r(prec); mpfr_set_ui(r.x_, v, MPFR_RNDN); return r; }
    static Real of(const Int& v, mpfr_prec_t prec) { Real r(prec); mpfr_set_z(r.x_, v.get_mpz_t(), MPFR_RNDN); return r; }
    static Real of(const Rat& v, mpfr_prec_t prec) { Real r(prec); mpfr_set_q(r.x_, v.get_mpq_t(), MPFR_RNDN); return r; }

    mpfr_prec_t prec() const { return mpfr_get_prec(x_); }
    mpfr_ptr raw() { return x_; }
    mpfr_srcptr raw() const { return x_; }

    int sign() const { return mpfr_sgn(x_); }
    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }

    // Scientific notation with the given number of significant digits.
    std::string str(long digits) const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*Re", static_cast<int>(digits - 1), x_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    friend Real operator+(const Real& a, const Real& b) { return bin(a, b, mpfr_add); }
    friend Real operator-(const Real& a, const Real& b) { return bin(a, b, mpfr_sub); }
    friend Real operator*(const Real& a, const Real& b) { return bin(a, b, mpfr_mul); }
    friend Real operator/(const Real& a, const Real& b) { return bin(a, b, mpfr_div); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.x_, b.x_) < 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.x_, b.x_) <= 0; }

    friend Real log(const Real& a) { Real r(a.prec()); mpfr_log(r.x_, a.x_, MPFR_RNDN); return r; }
    friend Real log10(const Real& a) { Real r(a.prec()); mpfr_log10(r.x_, a.x_, MPFR_RNDN); return r; }
    friend Real abs(const Real& a) { Real r(a.prec()); mpfr_abs(r.x_, a.x_, MPFR_RNDN); return r; }

private:
    using BinOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    static Real bin(const Real& a, const Real& b, BinOp op) {
        Real r(std::max(a.prec(), b.prec()));
        op(r.x_, a.x_, b.x_, MPFR_RNDN);
        return r;
    }
    mpfr_t x_;
};

// Evaluate at doubling precision until the leading `digits` significant digits
// are reproduced, then return the stabilized value. Throws precision_error
// when 2^22 bits do not suffice.
inline Real certified(const std::function<Real(mpfr_prec_t)>& f, long digits) {
    mpfr_prec_t p = 128 + static_cast<mpfr_prec_t>(4 * digits);
    for (; p <= (mpfr_prec_t{1} << 22); p *= 2) {
        Real a = f(p);
        Real b = f(2 * p);
        if (a.str(digits) == b.str(digits)) return b;
    }
    throw precision_error("certified evaluation did not stabilize");
}

} // namespace perfhom
