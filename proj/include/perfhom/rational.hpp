#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <vector>

namespace perfhom {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;

// Thrown when a certified-precision computation cannot reach the requested digits.
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int floor_rat(const Rat& x) { return floor_div(x.get_num(), x.get_den()); }
inline Int ceil_rat(const Rat& x) { return ceil_div(x.get_num(), x.get_den()); }

// Nearest integer, ties toward +infinity: floor(x + 1/2).
inline Int round_rat(const Rat& x) { return floor_rat(x + Rat(1, 2)); }

// floor(sqrt(n)) for n >= 0.
inline Int floor_sqrt(const Int& n) {
    if (n < 0) throw std::invalid_argument("floor_sqrt: negative argument");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

// Least integer a >= 0 with a^2 >= x (x >= 0 rational).
inline Int ceil_sqrt_rat(const Rat& x) {
    if (x < 0) throw std::invalid_argument("ceil_sqrt_rat: negative argument");
    const Int& p = x.get_num();
    const Int& q = x.get_den();
    Int a = floor_sqrt(floor_div(p, q));
    while (a * a * q < p) ++a;
    while (a > 0 && (a - 1) * (a - 1) * q >= p) --a;
    return a;
}

// floor(sqrt(x)) for x >= 0 rational: greatest integer a with a^2 <= x.
inline Int floor_sqrt_rat(const Rat& x) {
    if (x < 0) throw std::invalid_argument("floor_sqrt_rat: negative argument");
    const Int& p = x.get_num();
    const Int& q = x.get_den();
    Int a = floor_sqrt(floor_div(p, q));
    while ((a + 1) * (a + 1) * q <= p) ++a;
    while (a > 0 && a * a * q > p) --a;
    return a;
}

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rat& x) {
    return x.get_str();
}

} // namespace perfhom
