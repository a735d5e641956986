#pragma once

// Deliberately naive reference implementations used to cross-check the
// library. They favour obviousness over speed: box enumeration for shortest
// vectors, textbook row/column reduction for Smith forms.

#include "perfhom/forms.hpp"
#include "perfhom/linalg.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

using perfhom::Int;
using perfhom::IntMat;
using perfhom::IntVec;
using perfhom::Rat;
using perfhom::SymForm;

struct BruteMin {
    Rat mu;
    std::vector<IntVec> vectors; // sign-normalized, sorted
};

// Every v with v^t A v <= bound satisfies x_i^2 <= bound * (A^{-1})_ii, so a
// rectangular box sweep is exhaustive.
inline BruteMin brute_shortest(const SymForm& A) {
    const int n = A.dim();
    auto inv = perfhom::inverse(A.to_mat());
    if (!inv) throw std::invalid_argument("brute_shortest: singular form");

    Rat bound = A.at(0, 0);
    for (int i = 1; i < n; ++i) bound = std::min(bound, A.at(i, i));

    std::vector<long> hi(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Int h = perfhom::floor_sqrt_rat(bound * inv->at(i, i));
        hi[static_cast<size_t>(i)] = h.get_si();
    }

    BruteMin out;
    out.mu = bound;
    IntVec v(static_cast<size_t>(n));
    // lexicographic sweep over the box, first nonzero coordinate positive
    std::vector<long> x(static_cast<size_t>(n), 0);
    auto value_of = [&]() {
        for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = x[static_cast<size_t>(i)];
        return A.evaluate(v);
    };
    std::function<void(int, bool)> sweep = [&](int pos, bool lead) {
        if (pos == n) {
            if (lead) return; // the zero vector
            Rat val = value_of();
            if (val < out.mu) {
                out.mu = val;
                out.vectors.clear();
                out.vectors.push_back(v);
            } else if (val == out.mu) {
                out.vectors.push_back(v);
            }
            return;
        }
        long h = hi[static_cast<size_t>(pos)];
        long lo = lead ? 0 : -h; // sign normalization: leading coordinate >= 0
        for (long t = lo; t <= h; ++t) {
            x[static_cast<size_t>(pos)] = t;
            sweep(pos + 1, lead && t == 0);
        }
        x[static_cast<size_t>(pos)] = 0;
    };
    sweep(0, true);
    std::sort(out.vectors.begin(), out.vectors.end());
    return out;
}

// Textbook Smith normal form by repeated pivoting on the least nonzero entry.
inline std::vector<Int> brute_snf(IntMat m) {
    std::vector<Int> out;
    int r = 0;
    while (r < m.rows && r < m.cols) {
        // locate the nonzero entry of least absolute value in the submatrix
        int pi = -1, pj = -1;
        Int best = 0;
        for (int i = r; i < m.rows; ++i)
            for (int j = r; j < m.cols; ++j)
                if (m.at(i, j) != 0 && (pi < 0 || abs(m.at(i, j)) < best)) {
                    best = abs(m.at(i, j));
                    pi = i;
                    pj = j;
                }
        if (pi < 0) break;
        for (int j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(pi, j));
        for (int i = 0; i < m.rows; ++i) std::swap(m.at(i, r), m.at(i, pj));

        bool dirty = false;
        for (int i = r + 1; i < m.rows; ++i)
            if (m.at(i, r) != 0) {
                Int q = m.at(i, r) / m.at(r, r); // C++ truncation keeps |rem| < |pivot|
                for (int j = 0; j < m.cols; ++j) m.at(i, j) -= q * m.at(r, j);
                if (m.at(i, r) != 0) dirty = true;
            }
        for (int j = r + 1; j < m.cols; ++j)
            if (m.at(r, j) != 0) {
                Int q = m.at(r, j) / m.at(r, r);
                for (int i = 0; i < m.rows; ++i) m.at(i, j) -= q * m.at(i, r);
                if (m.at(r, j) != 0) dirty = true;
            }
        if (dirty) continue; // smaller remainders appeared: pick a new pivot

        // pivot must divide the rest of the submatrix
        bool divides = true;
        for (int i = r + 1; i < m.rows && divides; ++i)
            for (int j = r + 1; j < m.cols && divides; ++j)
                if (m.at(i, j) % m.at(r, r) != 0) {
                    for (int c = 0; c < m.cols; ++c) m.at(r, c) += m.at(i, c);
                    divides = false;
                }
        if (!divides) continue;

        out.push_back(abs(m.at(r, r)));
        ++r;
    }
    return out;
}

// Exact rank by rational Gaussian elimination, kept separate from the
// library's fraction-free path.
inline int brute_rank(const IntMat& m) {
    std::vector<std::vector<Rat>> a(static_cast<size_t>(m.rows),
                                    std::vector<Rat>(static_cast<size_t>(m.cols)));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rat(m.at(i, j));
    int rank = 0;
    for (int c = 0; c < m.cols && rank < m.rows; ++c) {
        int p = -1;
        for (int i = rank; i < m.rows; ++i)
            if (a[static_cast<size_t>(i)][static_cast<size_t>(c)] != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(a[static_cast<size_t>(rank)], a[static_cast<size_t>(p)]);
        for (int i = rank + 1; i < m.rows; ++i) {
            Rat f = a[static_cast<size_t>(i)][static_cast<size_t>(c)] / a[static_cast<size_t>(rank)][static_cast<size_t>(c)];
            if (f != 0)
                for (int j = c; j < m.cols; ++j)
                    a[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(rank)][static_cast<size_t>(j)];
        }
        ++rank;
    }
    return rank;
}

} // namespace oracles
