#pragma once

#include "perfhom/chain.hpp"

#include <optional>

namespace perfhom {

struct SnfResult {
    std::vector<Int> invariant_factors; // positive, each divides the next
    int rank() const { return static_cast<int>(invariant_factors.size()); }
};

// Exact Smith normal form (divisibility chain enforced).
SnfResult smith_normal_form(const IntMat& m);

// Product of the invariant factors: the order of the cokernel torsion.
Int torsion_card(const SnfResult& s);

// Bound on the cokernel torsion of the column map: floor of the product of
// the Euclidean norms of a column subset whose span is the full image.
// Default subset: greedy by ascending norm among rank-increasing columns.
// A supplied subset must be independent and span the image.
Int lemma1_bound(const IntMat& m, const std::optional<std::vector<int>>& columns = std::nullopt);

struct Prop3Bound {
    Int a;          // min(card_{k+1}, card_k)
    Int b_squared;  // max squared column norm of d_{k+1} (0 when no columns)
    Int b;          // ceil of the column-norm sup, floored at 1
    Int bound;      // b^a
};

// Bound on the homology torsion of degree k from the shape of d_{k+1}.
Prop3Bound prop3_bound(const ChainComplexZ& c, int k);

struct Homology {
    Int betti;
    std::vector<Int> torsion; // invariant factors > 1
};

// H_k = ker d_k / im d_{k+1}, computed exactly.
Homology homology(const ChainComplexZ& c, int k);

// Product of the prime-power parts at primes > n of each factor.
Int card_filtered(const std::vector<Int>& factors, long n);

} // namespace perfhom
