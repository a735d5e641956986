#pragma once

#include "perfhom/forms.hpp"

namespace perfhom {

// Minimal vectors of a positive definite form, one representative per +-pair,
// sign-normalized (first nonzero coordinate positive) and lexicographically sorted.
struct MinVecSet {
    Rat mu;
    std::vector<IntVec> vectors;
    int pair_count() const { return static_cast<int>(vectors.size()); }
};

// Exact enumeration certificate: every lattice vector with h(v) <= mu is visited.
MinVecSet shortest_vectors(const SymForm& A, int threads = 1);

// All v != 0 with evaluate(v) <= bound, one per +-pair, sorted. Exact.
std::vector<IntVec> vectors_below(const SymForm& A, const Rat& bound, int threads = 1);

// Perfection: the rank-one forms v v^t over the minimal vectors span the
// n(n+1)/2-dimensional space of symmetric matrices.
bool is_perfect(const SymForm& A);

// Unimodular g whose columns b_i satisfy evaluate(b_i) <= n^2 * mu(A).
// Requires A positive definite with minimal vectors spanning Q^n.
// Construction: Hermite basis of the minimal-vector lattice, then greedy
// size reduction; exhaustive fallback for n <= 4. The norm bound is a
// checked postcondition.
IntMat bounded_basis(const SymForm& A);

struct Prop1Report {
    IntMat g;
    Rat mu;
    std::vector<Rat> basis_norms;  // evaluate(b_i)
    std::vector<Int> coord_max;    // per-coordinate max |x_i| over minimal vectors of A.act(g)
    Int overall_max;
    Int bound;                     // A(N)
    bool basis_ok;                 // basis_norms <= n^2 mu
    bool coords_ok;                // overall_max <= bound
};

// Reduced-basis coordinate check: after the basis change from bounded_basis,
// all minimal-vector coordinates are bounded by the explicit constant A(N).
Prop1Report prop1_check(const SymForm& A);

} // namespace perfhom
