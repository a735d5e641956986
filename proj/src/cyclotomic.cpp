#include "perfhom/cyclotomic.hpp"

#include <cmath>
#include <mutex>

namespace perfhom {

namespace {

std::vector<Rat>& bernoulli_cache() {
    static std::vector<Rat> cache{Rat(1)};
    return cache;
}
std::mutex bernoulli_mutex;

Int binom(unsigned long n, unsigned long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

bool is_prime_u64(std::uint64_t n) {
    mpz_class z(static_cast<unsigned long>(n));
    return mpz_probab_prime_p(z.get_mpz_t(), 30) != 0;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a % p, p - 2, p); }

// B_0..B_k mod m, valid when every denominator is invertible mod m
// (m = p or p^2 with k <= p - 3).
std::vector<std::uint64_t> bernoulli_row_mod(long k, std::uint64_t m, std::uint64_t p) {
    std::vector<std::uint64_t> b(static_cast<size_t>(k) + 1);
    b[0] = 1 % m;
    std::vector<std::uint64_t> row = {1 % m, 1 % m}; // binom(1, .)
    for (long t = 1; t <= k; ++t) {
        // advance to binom(t+1, .)
        row.push_back(1 % m);
        for (long j = t; j >= 1; --j) row[j] = (row[j] + row[j - 1]) % m;
        std::uint64_t s = 0;
        for (long j = 0; j < t; ++j) s = (s + mulmod(row[j], b[j], m)) % m;
        std::uint64_t inv = invmod(static_cast<std::uint64_t>(t) + 1, p);
        if (m != p) {
            // lift the inverse from mod p to mod p^2 (Newton step)
            std::uint64_t x = inv;
            std::uint64_t tx = mulmod(static_cast<std::uint64_t>(t) + 1, x, m);
            inv = mulmod(x, (2 + m - tx) % m, m);
        }
        b[t] = mulmod((m - s) % m, inv, m);
    }
    return b;
}

void require_odd_prime(std::uint64_t p, const char* who) {
    if (p < 3 || !is_prime_u64(p)) throw std::invalid_argument(std::string(who) + ": p must be an odd prime");
}

} // namespace

Rat bernoulli_exact(long n) {
    if (n < 0) throw std::invalid_argument("bernoulli_exact: negative index");
    std::lock_guard<std::mutex> lock(bernoulli_mutex);
    auto& cache = bernoulli_cache();
    while (static_cast<long>(cache.size()) <= n) {
        unsigned long m = cache.size();
        Rat s = 0;
        for (unsigned long j = 0; j < m; ++j) s += Rat(binom(m + 1, j)) * cache[j];
        cache.push_back(-s / Rat(Int(m) + 1));
    }
    return cache[static_cast<size_t>(n)];
}

Int bernoulli_numerator(long n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("bernoulli_numerator: n must be even and >= 2");
    Rat q = bernoulli_exact(n) / Rat(Int(n));
    return abs(q.get_num());
}

std::uint64_t bernoulli_mod_p(long k, std::uint64_t p) {
    require_odd_prime(p, "bernoulli_mod_p");
    if (k < 0 || static_cast<std::uint64_t>(k) > p - 3)
        throw std::invalid_argument("bernoulli_mod_p: k outside [0, p-3]");
    return bernoulli_row_mod(k, p, p)[static_cast<size_t>(k)];
}

std::vector<IrregularPair> irregular_pairs(std::uint64_t p) {
    require_odd_prime(p, "irregular_pairs");
    std::vector<IrregularPair> out;
    if (p < 7) return out;
    long kmax = static_cast<long>(p) - 3;
    auto b = bernoulli_row_mod(kmax, p, p);
    for (long k = 2; k <= kmax; k += 2)
        if (b[static_cast<size_t>(k)] == 0) out.push_back({p, static_cast<std::uint64_t>(k)});
    return out;
}

std::vector<IrregularPair> irregular_pairs_upto(std::uint64_t max_p) {
    std::vector<IrregularPair> out;
    for (std::uint64_t p = 3; p <= max_p; p += 2) {
        if (!is_prime_u64(p)) continue;
        auto pairs = irregular_pairs(p);
        out.insert(out.end(), pairs.begin(), pairs.end());
    }
    return out;
}

Int h2_order_even(std::uint64_t p, long n) {
    require_odd_prime(p, "h2_order_even");
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("h2_order_even: n must be even and >= 2");
    if (n <= 4000) {
        Int num = bernoulli_numerator(n);
        Int q(static_cast<unsigned long>(p));
        Int part = 1;
        while (num % q == 0) {
            part *= q;
            num /= q;
        }
        return part;
    }
    if (static_cast<std::uint64_t>(n) <= p - 3) {
        // mod p^2 lifting decides valuation 0 or 1
        std::uint64_t m = p * p;
        auto b = bernoulli_row_mod(n, m, p);
        std::uint64_t inv_n = invmod(static_cast<std::uint64_t>(n) % p, p);
        std::uint64_t tn = mulmod(static_cast<std::uint64_t>(n), inv_n, m);
        inv_n = mulmod(inv_n, (2 + m - tn) % m, m);
        std::uint64_t val = mulmod(b[static_cast<size_t>(n)], inv_n, m);
        if (val % p != 0) return 1;
        if (val != 0) return Int(static_cast<unsigned long>(p));
        throw std::invalid_argument("h2_order_even: valuation >= 2 is beyond the mod-p^2 lifting");
    }
    throw std::invalid_argument("h2_order_even: n too large for both the exact and lifted paths");
}

Component kurihara_component(std::uint64_t p, long n) {
    require_odd_prime(p, "kurihara_component");
    if (n < 3 || n % 2 == 0 || static_cast<std::uint64_t>(n) > p - 2)
        throw std::invalid_argument("kurihara_component: n must be odd with 3 <= n <= p-2");
    long j = static_cast<long>(p) - n; // even, 2 <= j <= p-3
    return bernoulli_mod_p(j, p) != 0 ? Component::zero : Component::possibly_nonzero;
}

std::uint64_t l0_mod_p(std::uint64_t p, long n) {
    require_odd_prime(p, "l0_mod_p");
    if (n < 3 || n % 2 == 0 || static_cast<std::uint64_t>(n) > p - 2)
        throw std::invalid_argument("l0_mod_p: n must be odd with 3 <= n <= p-2");
    std::uint64_t j = p - static_cast<std::uint64_t>(n);
    std::uint64_t b = bernoulli_mod_p(static_cast<long>(j), p);
    return mulmod((p - b) % p, invmod(j % p, p), p);
}

VandiverOutcome vandiver_component_test(std::uint64_t p, std::uint64_t k, int q_budget) {
    require_odd_prime(p, "vandiver_component_test");
    if (k < 2 || k % 2 != 0 || k > p - 3)
        throw std::invalid_argument("vandiver_component_test: k must be even with 2 <= k <= p-3");
    if (q_budget < 1) throw std::invalid_argument("vandiver_component_test: q budget must be positive");

    VandiverOutcome out;
    out.p = p;
    out.k = k;

    // exponents a^(p-1-k) mod p for a = 1..(p-1)/2
    std::uint64_t half = (p - 1) / 2;
    std::vector<std::uint64_t> e(half + 1);
    for (std::uint64_t a = 1; a <= half; ++a) e[a] = powmod(a, p - 1 - k, p);

    for (std::uint64_t m = 2; out.q_tested < q_budget; ++m) {
        if (m % p == 0) continue; // q = 1 (mod p^2) is inadmissible
        std::uint64_t q = m * p + 1;
        if (!is_prime_u64(q)) continue;

        // least primitive root mod q (prime factors of q-1 = m*p by trial division)
        std::vector<std::uint64_t> fac = {p};
        std::uint64_t mm = m;
        for (std::uint64_t d = 2; d * d <= mm; ++d)
            while (mm % d == 0) {
                fac.push_back(d);
                while (mm % d == 0) mm /= d;
                break;
            }
        if (mm > 1) fac.push_back(mm);
        std::uint64_t r = 0;
        for (std::uint64_t cand = 2; cand < q; ++cand) {
            bool primitive = true;
            for (std::uint64_t f : fac)
                if (powmod(cand, (q - 1) / f, q) == 1) {
                    primitive = false;
                    break;
                }
            if (primitive) {
                r = cand;
                break;
            }
        }

        std::uint64_t eta = powmod(r, (q - 1) / p, q); // order exactly p
        std::uint64_t U = 1;
        std::uint64_t eta_a = 1;
        for (std::uint64_t a = 1; a <= half; ++a) {
            eta_a = mulmod(eta_a, eta, q);
            U = mulmod(U, powmod((q + 1 - eta_a) % q, e[a], q), q);
        }
        std::uint64_t w = powmod(U, (q - 1) / p, q);
        ++out.q_tested;
        if (w != 1) {
            out.component_zero = true;
            out.witness_q = q;
            out.witness_residue = w;
            return out;
        }
        out.missed_q.push_back(q);
    }
    return out; // inconclusive within budget
}

HeuristicReport heuristic_sum(std::uint64_t x) {
    if (x < 37) throw std::invalid_argument("heuristic_sum: x must be at least 37");
    std::vector<bool> composite(x + 1, false);
    for (std::uint64_t i = 2; i * i <= x; ++i)
        if (!composite[i])
            for (std::uint64_t j = i * i; j <= x; j += i) composite[j] = true;

    double sum = 0.0, comp = 0.0; // Kahan
    std::uint64_t count = 0;
    double below37 = 0.0;
    for (std::uint64_t p = 2; p <= x; ++p) {
        if (composite[p]) continue;
        double term = 1.0 / static_cast<double>(p);
        if (p < 37) {
            below37 += term;
            continue;
        }
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        ++count;
    }
    HeuristicReport r;
    r.prime_sum = sum;
    r.paper_rhs = std::log(std::log(static_cast<double>(x))) - 2.56;
    const double mertens = 0.26149721284764278;
    r.mertens_rhs = std::log(std::log(static_cast<double>(x))) + mertens - below37;
    r.prime_count = count;
    return r;
}

} // namespace perfhom
