#include "perfhom/bounds.hpp"

namespace perfhom {

Rat gamma_bound(int N) {
    if (N < 1) throw std::invalid_argument("gamma_bound: N must be positive");
    Rat g(N + 4, 4);
    g.canonicalize();
    return g;
}

Rat hermite_pow_exact(int N) {
    // gamma_N^N for N = 1..8
    static const Rat table[8] = {Rat(1), Rat(4, 3), Rat(2),      Rat(4),
                                 Rat(8), Rat(64, 3), Rat(64),    Rat(256)};
    if (N < 1 || N > 8) throw std::invalid_argument("hermite_pow_exact: known only for N <= 8");
    return table[N - 1];
}

Int s_bound(int N) {
    if (N < 1) throw std::invalid_argument("s_bound: N must be positive");
    return (Int(1) << N) - 1;
}

Int a_const(int N, bool exact_hermite) {
    if (N < 1) throw std::invalid_argument("a_const: N must be positive");
    // A^2 = N^(2(N-1)) * gamma^N is rational in both modes
    Rat gamma_pow;
    if (exact_hermite) {
        gamma_pow = hermite_pow_exact(N);
    } else {
        Rat g = gamma_bound(N);
        gamma_pow = 1;
        for (int i = 0; i < N; ++i) gamma_pow *= g;
    }
    Int npow = 1;
    for (int i = 0; i < 2 * (N - 1); ++i) npow *= N;
    return ceil_sqrt_rat(Rat(npow) * gamma_pow);
}

Rat b_const(int N) {
    Int a = a_const(N);
    Int t = 2 * a + 1;
    Int p = 1;
    for (int i = 0; i < N; ++i) p *= t;
    return Rat(p, 2);
}

static Int factorial(unsigned long k) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), k);
    return f;
}

Int c_const(long k, int N, bool rounded_B) {
    if (k < 0) throw std::invalid_argument("c_const: k must be nonnegative");
    Rat B = b_const(N);
    if (rounded_B) B = Rat(ceil_rat(B));
    Rat prod = 1;
    for (long j = 0; j <= k; ++j) {
        Rat factor = B - Rat(Int(j));
        if (factor == 0) return 0;
        prod *= factor;
    }
    return ceil_rat(prod / Rat(factorial(static_cast<unsigned long>(k) + 1)));
}

Int f_const(long k, int N) {
    if (k < 0) throw std::invalid_argument("f_const: k must be nonnegative");
    Int s = s_bound(N);
    Int r;
    mpz_bin_ui(r.get_mpz_t(), s.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

namespace {

// decimal data for value = base^multiplier (base >= 2, multiplier >= 1)
void fill_log_strings(BigBound& b, long digits) {
    const Int& f = b.base;
    const Int& c = b.multiplier;
    Real ln_v = certified([&](mpfr_prec_t p) { return Real::of(c, p) * log(Real::of(f, p)); }, digits);
    Real log10_v = certified([&](mpfr_prec_t p) { return Real::of(c, p) * log10(Real::of(f, p)); }, digits);
    Real lnln_v = certified([&](mpfr_prec_t p) { return log(Real::of(c, p) * log(Real::of(f, p))); }, digits);
    b.ln_str = ln_v.str(digits);
    b.log10_str = log10_v.str(digits);
    b.lnln_str = lnln_v.str(digits);
    b.digits = digits;
}

} // namespace

BigBound h_const(long k, int N, long digits) {
    if (N < 2) throw std::invalid_argument("h_const: N must be at least 2");
    long kmax = static_cast<long>(N) * (N - 1) / 2;
    if (k < 1 || k > kmax) throw std::invalid_argument("h_const: k outside [1, N(N-1)/2]");
    long l = static_cast<long>(N) * (N + 1) / 2 - 1 - k;
    BigBound b;
    b.base = f_const(l, N);
    b.multiplier = c_const(l, N);
    if (b.multiplier < 1) throw std::logic_error("h_const: nonpositive exponent");
    if (b.base == 0) {
        b.zero = true;
        b.exact = Int(0);
        b.digits = digits;
        return b;
    }
    if (b.base == 1) {
        b.exact = Int(1);
        b.ln_str = "0";
        b.log10_str = "0";
        b.digits = digits;
        return b;
    }
    // materialize when the power stays small (~256 KB of limbs)
    size_t base_bits = mpz_sizeinbase(b.base.get_mpz_t(), 2);
    if (b.multiplier.fits_ulong_p() && Int(base_bits) * b.multiplier <= (1 << 21)) {
        Int e;
        mpz_pow_ui(e.get_mpz_t(), b.base.get_mpz_t(), b.multiplier.get_ui());
        b.exact = e;
    }
    fill_log_strings(b, digits);
    return b;
}

BigBound k_const(long m, long digits) {
    if (m < 1) throw std::invalid_argument("k_const: m must be positive");
    return h_const(m, static_cast<int>(2 * m + 1), digits);
}

BigBound v_const(long n, long digits) {
    if (n < 2) throw std::invalid_argument("v_const: n must be at least 2");
    return k_const(2 * n - 2, digits);
}

Real epsilon_poly(long m, mpfr_prec_t prec) {
    if (m < 1) throw std::invalid_argument("epsilon_poly: m must be positive");
    Real ln2 = log(Real::of(2ul, prec));
    Real lnm = log(Real::of(static_cast<unsigned long>(m), prec));
    Real M = Real::of(static_cast<unsigned long>(m), prec);
    Real m2 = M * M;
    Real m3 = m2 * M;
    Real m4 = m3 * M;
    Real c4 = Real::of(4ul, prec) * ln2;
    Real c3 = Real::of(20ul, prec) * lnm + Real::of(14ul, prec) + Real::of(8ul, prec) * ln2;
    Real c2 = Real::of(15ul, prec) * lnm + Real::of(22ul, prec) + Real::of(7ul, prec) * ln2;
    Real c1 = Real::of(5ul, prec) * lnm + Real::of(Rat(31, 2), prec) + Real::of(3ul, prec) * ln2;
    Real c0 = Real::of(Rat(7, 2), prec) * lnm + Real::of(Rat(7, 2), prec) * ln2 + Real::of(5ul, prec);
    return c4 * m4 + c3 * m3 + c2 * m2 + c1 * M + c0;
}

std::string epsilon_poly_str(long m, long digits) {
    return certified([&](mpfr_prec_t p) { return epsilon_poly(m, p); }, digits).str(digits);
}

namespace {

// Decide lhs <= rhs with the comparison reproduced at doubled precision.
bool certified_le(const std::function<Real(mpfr_prec_t)>& lhs, const std::function<Real(mpfr_prec_t)>& rhs) {
    for (mpfr_prec_t p = 256; p <= (mpfr_prec_t{1} << 22); p *= 2) {
        bool a = lhs(p) <= rhs(p);
        bool b = lhs(2 * p) <= rhs(2 * p);
        if (a == b) return a;
    }
    throw precision_error("certified comparison did not stabilize");
}

GrowthCheck growth_check(long m, const Int& f, const Int& c, unsigned long lead, unsigned long power,
                         unsigned long eps_cap, long digits) {
    auto lhs = [&](mpfr_prec_t p) { return log(Real::of(c, p) * log(Real::of(f, p))); };
    auto m4lnm = [&](mpfr_prec_t p) {
        Real M = Real::of(static_cast<unsigned long>(m), p);
        return M * M * M * M * log(M);
    };
    auto rhs_poly = [&](mpfr_prec_t p) { return Real::of(lead, p) * m4lnm(p) + epsilon_poly(m, p); };
    auto rhs_power = [&](mpfr_prec_t p) { return Real::of(power, p) * m4lnm(p); };
    auto eps_bound = [&](mpfr_prec_t p) { return Real::of(eps_cap, p) * m4lnm(p); };

    GrowthCheck g;
    g.lhs = certified(lhs, digits).str(digits);
    g.rhs_poly = certified(rhs_poly, digits).str(digits);
    g.rhs_power = certified(rhs_power, digits).str(digits);
    g.ok_poly = certified_le(lhs, rhs_poly);
    g.ok_power = certified_le(lhs, rhs_power);
    g.ok_epsilon = certified_le([&](mpfr_prec_t p) { return epsilon_poly(m, p); }, eps_bound);
    g.digits = digits;
    return g;
}

} // namespace

GrowthCheck lemma2_check(long m, long digits) {
    if (m < 2) throw std::invalid_argument("lemma2_check: m must be at least 2");
    BigBound k = k_const(m, digits);
    return growth_check(m, k.base, k.multiplier, 12, 20, 8, digits);
}

GrowthCheck vandiver_bound_check(long n, long digits) {
    if (n < 2) throw std::invalid_argument("vandiver_bound_check: n must be at least 2");
    BigBound v = v_const(n, digits);
    return growth_check(n, v.base, v.multiplier, 192, 224, 32, digits);
}

} // namespace perfhom
