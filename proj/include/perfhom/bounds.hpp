#pragma once

#include "perfhom/real.hpp"

#include <optional>

namespace perfhom {

// Upper bound for the Hermite constant in dimension N: 1 + N/4.
Rat gamma_bound(int N);
// Exact N-th powers of the Hermite constants, known for N <= 8.
Rat hermite_pow_exact(int N);

// Bound on the number of minimal-vector pairs: 2^N - 1.
Int s_bound(int N);

// A(N) = ceil(N^(N-1) * gamma^(N/2)); with exact_hermite, the known Hermite
// constants replace the 1 + N/4 bound (never the default).
Int a_const(int N, bool exact_hermite = false);

// B(N) = (2 A(N) + 1)^N / 2, exact rational.
Rat b_const(int N);

// c(k, N) = ceil(binomial(B(N), k + 1)), generalized binomial over Q.
// With rounded_B, B(N) is rounded up to an integer before the product.
Int c_const(long k, int N, bool rounded_B = false);

// f(k, N) = binomial(2^N - 1, k).
Int f_const(long k, int N);

// A bound too large to materialize: value = base^multiplier with exact
// integer base and multiplier, plus certified decimal data in log scale.
struct BigBound {
    Int base;              // f
    Int multiplier;        // c
    bool zero = false;     // base == 0: the bound degenerates to 0
    std::optional<Int> exact; // materialized when it fits a size budget
    std::string ln_str;    // ln(value)
    std::string log10_str; // log10(value)
    std::string lnln_str;  // ln(ln(value)), empty when value <= 1
    long digits = 0;       // certified significant digits
};

// h(k, N) = f(l, N)^c(l, N) with l = N(N+1)/2 - 1 - k.
BigBound h_const(long k, int N, long digits = 30);
// k(m) = h(m, 2m + 1).
BigBound k_const(long m, long digits = 30);
// v(n) = k(2n - 2).
BigBound v_const(long n, long digits = 30);

// The explicit error polynomial:
// 4 ln2 m^4 + (20 ln m + 14 + 8 ln2) m^3 + (15 ln m + 22 + 7 ln2) m^2
//   + (5 ln m + 31/2 + 3 ln2) m + (7/2) ln m + (7/2) ln2 + 5.
Real epsilon_poly(long m, mpfr_prec_t prec);
std::string epsilon_poly_str(long m, long digits = 30);

struct GrowthCheck {
    std::string lhs;        // ln ln of the bound
    std::string rhs_poly;   // leading term + epsilon polynomial
    std::string rhs_power;  // pure power form
    bool ok_poly = false;
    bool ok_power = false;
    bool ok_epsilon = false; // epsilon(m) <= 8 m^4 ln m (m >= 6), resp. 32 n^4 ln n
    long digits = 0;
};

// ln ln k(m) <= 12 m^4 ln m + eps(m) and ln k(m) <= m^(20 m^4), for m >= 2.
GrowthCheck lemma2_check(long m, long digits = 30);
// ln ln v(n) <= 192 n^4 ln n + eps(n) and ln v(n) <= n^(224 n^4), for n >= 2.
GrowthCheck vandiver_bound_check(long n, long digits = 30);

} // namespace perfhom
