#pragma once

#include "perfhom/rational.hpp"

#include <cstddef>
#include <optional>

namespace perfhom {

// Dense integer matrix, row-major.
struct IntMat {
    int rows = 0, cols = 0;
    std::vector<Int> a;

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Int& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Int& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static IntMat identity(int n);
    IntMat transposed() const;
    bool operator==(const IntMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

// Dense rational matrix, row-major.
struct RatMat {
    int rows = 0, cols = 0;
    std::vector<Rat> a;

    RatMat() = default;
    RatMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
    explicit RatMat(const IntMat& m);

    Rat& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Rat& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static RatMat identity(int n);
    RatMat transposed() const;
};

IntMat mul(const IntMat& x, const IntMat& y);
RatMat mul(const RatMat& x, const RatMat& y);
IntVec apply(const IntMat& m, const IntVec& v);

// Exact determinant via fraction-free (Bareiss) elimination.
Int det(const IntMat& m);
Rat det(const RatMat& m);
bool is_unimodular(const IntMat& g);

int rank(const RatMat& m);
int rank_int_vectors(const std::vector<IntVec>& vs, int dim);

std::optional<RatMat> inverse(const RatMat& m);

// Solve M x = b exactly; nullopt when inconsistent. M need not be square.
std::optional<std::vector<Rat>> solve(const RatMat& m, const std::vector<Rat>& b);

// Basis of the lattice generated by the columns of M (full row rank required):
// returns a square matrix whose columns generate the same lattice.
// Throws std::invalid_argument when the columns do not span Q^rows.
IntMat column_lattice_basis(const IntMat& m);

// Divide by the gcd of the entries (sign kept: rays are directed).
void make_primitive(IntVec& v);

inline Int dot(const IntVec& x, const IntVec& y) {
    Int s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline IntVec negated(const IntVec& v) {
    IntVec w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = -v[i];
    return w;
}

// Sign convention used everywhere a vector stands for the pair {v, -v}:
// first nonzero coordinate positive.
inline void canonical_sign(IntVec& v) {
    for (const Int& x : v) {
        if (x != 0) {
            if (x < 0) v = negated(v);
            return;
        }
    }
}

} // namespace perfhom
