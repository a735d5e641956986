#pragma once

#include "perfhom/rational.hpp"

#include <cstdint>

namespace perfhom {

// B_0 = 1, B_1 = -1/2, sum_{j=0}^{m} binom(m+1, j) B_j = 0.
Rat bernoulli_exact(long n);

// |numerator(B_n / n)| for even n >= 2.
Int bernoulli_numerator(long n);

// B_k mod p for 0 <= k <= p - 3 (p-integral there by von Staudt-Clausen).
std::uint64_t bernoulli_mod_p(long k, std::uint64_t p);

struct IrregularPair {
    std::uint64_t p;
    std::uint64_t k; // even, 2 <= k <= p - 3, with p | numerator(B_k)
    bool operator==(const IrregularPair& o) const { return p == o.p && k == o.k; }
};

// All irregular indices of a single odd prime (one O(p^2) mod-p pass).
std::vector<IrregularPair> irregular_pairs(std::uint64_t p);
// Scan over all odd primes <= max_p.
std::vector<IrregularPair> irregular_pairs_upto(std::uint64_t max_p);

// p-part of |numerator(B_n / n)| for even n: exact numerator at desk scale,
// mod-p^2 lifting for larger n <= p - 3.
Int h2_order_even(std::uint64_t p, long n);

enum class Component { zero, possibly_nonzero };

// Reflection test for odd n, 3 <= n <= p - 2: the component vanishes when
// B_{p-n} mod p is nonzero.
Component kurihara_component(std::uint64_t p, long n);

// -B_{p-n} / (p-n) mod p for odd n, 3 <= n <= p - 2.
std::uint64_t l0_mod_p(std::uint64_t p, long n);

struct VandiverOutcome {
    std::uint64_t p = 0, k = 0;
    bool component_zero = false;    // a witness prime certified the verdict
    std::uint64_t witness_q = 0;    // first q with a non-power residue
    std::uint64_t witness_residue = 0; // U^((q-1)/p) mod q at the witness, != 1
    std::vector<std::uint64_t> missed_q; // admissible q where the residue was 1
    int q_tested = 0;
};

// Cyclotomic-unit power test: for successive primes q = 1 (mod p),
// q != 1 (mod p^2), with eta of order p in (Z/q)^*, test whether
//   U = prod_{a=1}^{(p-1)/2} (1 - eta^a)^(a^(p-1-k))  (mod q)
// is a p-th power. A non-power witness decides component_zero; residues
// equal to 1 are per-q misses (expected frequency ~ 1/p).
VandiverOutcome vandiver_component_test(std::uint64_t p, std::uint64_t k, int q_budget);

struct HeuristicReport {
    double prime_sum;      // sum of 1/p over irregular-candidate range 37 <= p <= x
    double paper_rhs;      // ln ln x - 2.56
    double mertens_rhs;    // ln ln x + M - sum_{p < 37} 1/p
    std::uint64_t prime_count;
};

// Sieve-backed evaluation of the density heuristic at x.
HeuristicReport heuristic_sum(std::uint64_t x);

} // namespace perfhom
