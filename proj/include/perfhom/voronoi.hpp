#pragma once

#include "perfhom/chain.hpp"
#include "perfhom/minima.hpp"

#include <optional>

namespace perfhom {

// A codimension-1 face of the polyhedral cone spanned by the rank-one forms
// v v^t of the minimal vectors. The functional R satisfies <R, v v^t> =
// v^t R v >= 0 for every minimal vector, with equality exactly on `support`
// (indices into the owning MinVecSet).
struct Facet {
    SymForm functional;
    std::vector<std::size_t> support;
};

struct PerfectFormRecord {
    SymForm form;      // primitive integer representative
    MinVecSet minvecs;
    Rat det;
    Int aut_order;     // order of {g in GL_n(Z) : g^t A g = A}
    int index = 0;
};

enum class GroupMode { SL, GL };

// A face of some perfect cone, described by the +/- pairs whose rank-one
// forms span it.
struct Cell {
    std::vector<IntVec> generators;      // canonical-sign, sorted
    int dim = 0;                         // rank of span{v v^t} - 1
    bool in_boundary = false;            // generators do not span R^n
    Int stabilizer_order = 0;            // in the chosen group
    bool orientation_faithful = true;    // all stabilizer elements act by +1 on the span
};

SymForm initial_form(int n); // 2 on the diagonal, 1 off: perfect seed with n(n+1)/2 pairs

std::vector<Facet> facets(const PerfectFormRecord& P);

// The unique perfect form across the given facet: least rho > 0 such that
// P.form + rho * functional picks up new minimal vectors at the same minimum.
// Returned as a primitive integer form.
SymForm neighbor(const PerfectFormRecord& P, const Facet& f, int threads = 1);

// Some g with g^t A g = B, if the forms are GL_n(Z)-equivalent.
std::optional<IntMat> is_equivalent(const SymForm& A, const SymForm& B);

// All g in GL_n(Z) with g^t A g = A (finite for positive definite A).
std::vector<IntMat> form_automorphisms(const SymForm& A);

PerfectFormRecord make_record(const SymForm& A, int index, int threads = 1);

// Complete classification by the neighbor walk; 2 <= N <= 5 (6 behind the flag).
std::vector<PerfectFormRecord> enumerate_perfect(int N, int threads = 1,
                                                 bool allow_n6 = false);

// Facets of the cone spanned by {v v^t : v in generators}, computed inside
// the linear span; each facet is the index subset of generators lying on it.
std::vector<std::vector<std::size_t>> cell_facets(const std::vector<IntVec>& generators);

// Unimodular h with h * (+-S1) = +-S2 as sets of +/- pairs, subject to the
// group mode (SL requires det h = +1).
std::optional<IntMat> cell_equivalence(const std::vector<IntVec>& S1,
                                       const std::vector<IntVec>& S2, GroupMode mode);

// All unimodular h preserving the +/- pair set (both determinant signs).
std::vector<IntMat> cell_stabilizer_elements(const std::vector<IntVec>& S);

Cell make_cell(std::vector<IntVec> generators, GroupMode mode);

// (order, orientation_faithful) of the cell's stabilizer in the chosen group.
std::pair<Int, bool> stabilizer(const Cell& cell, GroupMode mode);

// The quotient chain complex on orientation-faithful interior cell orbits,
// with signed boundary maps; asserts dd = 0. 2 <= N <= 4.
ChainComplexZ build_complex(int N, GroupMode mode, int threads = 1);

} // namespace perfhom
