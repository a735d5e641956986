#include "perfhom/linalg.hpp"

#include <algorithm>

namespace perfhom {

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMat IntMat::transposed() const {
    IntMat t(cols, rows);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
    return t;
}

RatMat::RatMat(const IntMat& m) : RatMat(m.rows, m.cols) {
    for (size_t i = 0; i < m.a.size(); ++i) a[i] = Rat(m.a[i]);
}

RatMat RatMat::identity(int n) {
    RatMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

RatMat RatMat::transposed() const {
    RatMat t(cols, rows);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
    return t;
}

IntMat mul(const IntMat& x, const IntMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("mul: dimension mismatch");
    IntMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const Int& xik = x.at(i, k);
            if (xik == 0) continue;
            for (int j = 0; j < y.cols; ++j) z.at(i, j) += xik * y.at(k, j);
        }
    return z;
}

RatMat mul(const RatMat& x, const RatMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("mul: dimension mismatch");
    RatMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const Rat& xik = x.at(i, k);
            if (xik == 0) continue;
            for (int j = 0; j < y.cols; ++j) z.at(i, j) += xik * y.at(k, j);
        }
    return z;
}

IntVec apply(const IntMat& m, const IntVec& v) {
    if (static_cast<size_t>(m.cols) != v.size()) throw std::invalid_argument("apply: dimension mismatch");
    IntVec w(m.rows);
    for (int i = 0; i < m.rows; ++i) {
        Int s = 0;
        for (int j = 0; j < m.cols; ++j) s += m.at(i, j) * v[j];
        w[i] = s;
    }
    return w;
}

// Bareiss: exact integer elimination, pivot division stays exact.
Int det(const IntMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("det: matrix not square");
    int n = m.rows;
    if (n == 0) return 1;
    IntMat w = m;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (w.at(k, k) == 0) {
            int p = -1;
            for (int r = k + 1; r < n; ++r)
                if (w.at(r, k) != 0) { p = r; break; }
            if (p < 0) return 0;
            for (int c = k; c < n; ++c) std::swap(w.at(k, c), w.at(p, c));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Int t = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
                mpz_divexact(w.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            w.at(i, k) = 0;
        }
        prev = w.at(k, k);
    }
    return sign > 0 ? w.at(n - 1, n - 1) : Int(-w.at(n - 1, n - 1));
}

Rat det(const RatMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("det: matrix not square");
    int n = m.rows;
    RatMat w = m;
    Rat d = 1;
    for (int k = 0; k < n; ++k) {
        int p = -1;
        for (int r = k; r < n; ++r)
            if (w.at(r, k) != 0) { p = r; break; }
        if (p < 0) return 0;
        if (p != k) {
            for (int c = k; c < n; ++c) std::swap(w.at(k, c), w.at(p, c));
            d = -d;
        }
        d *= w.at(k, k);
        Rat inv_piv = 1 / w.at(k, k);
        for (int i = k + 1; i < n; ++i) {
            if (w.at(i, k) == 0) continue;
            Rat f = w.at(i, k) * inv_piv;
            for (int c = k; c < n; ++c) w.at(i, c) -= f * w.at(k, c);
        }
    }
    return d;
}

bool is_unimodular(const IntMat& g) {
    if (g.rows != g.cols) return false;
    Int d = det(g);
    return d == 1 || d == -1;
}

int rank(const RatMat& m) {
    RatMat w = m;
    int r = 0;
    for (int c = 0; c < w.cols && r < w.rows; ++c) {
        int p = -1;
        for (int i = r; i < w.rows; ++i)
            if (w.at(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = c; j < w.cols; ++j) std::swap(w.at(r, j), w.at(p, j));
        Rat inv_piv = 1 / w.at(r, c);
        for (int i = r + 1; i < w.rows; ++i) {
            if (w.at(i, c) == 0) continue;
            Rat f = w.at(i, c) * inv_piv;
            for (int j = c; j < w.cols; ++j) w.at(i, j) -= f * w.at(r, j);
        }
        ++r;
    }
    return r;
}

int rank_int_vectors(const std::vector<IntVec>& vs, int dim) {
    RatMat m(static_cast<int>(vs.size()), dim);
    for (size_t i = 0; i < vs.size(); ++i)
        for (int j = 0; j < dim; ++j) m.at(static_cast<int>(i), j) = Rat(vs[i][j]);
    return rank(m);
}

std::optional<RatMat> inverse(const RatMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("inverse: matrix not square");
    int n = m.rows;
    RatMat w = m;
    RatMat inv = RatMat::identity(n);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (w.at(i, c) != 0) { p = i; break; }
        if (p < 0) return std::nullopt;
        if (p != c)
            for (int j = 0; j < n; ++j) {
                std::swap(w.at(c, j), w.at(p, j));
                std::swap(inv.at(c, j), inv.at(p, j));
            }
        Rat piv = w.at(c, c);
        for (int j = 0; j < n; ++j) {
            w.at(c, j) /= piv;
            inv.at(c, j) /= piv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || w.at(i, c) == 0) continue;
            Rat f = w.at(i, c);
            for (int j = 0; j < n; ++j) {
                w.at(i, j) -= f * w.at(c, j);
                inv.at(i, j) -= f * inv.at(c, j);
            }
        }
    }
    return inv;
}

std::optional<std::vector<Rat>> solve(const RatMat& m, const std::vector<Rat>& b) {
    if (static_cast<size_t>(m.rows) != b.size()) throw std::invalid_argument("solve: dimension mismatch");
    RatMat w(m.rows, m.cols + 1);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) w.at(i, j) = m.at(i, j);
        w.at(i, m.cols) = b[i];
    }
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < m.cols && r < w.rows; ++c) {
        int p = -1;
        for (int i = r; i < w.rows; ++i)
            if (w.at(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j <= m.cols; ++j) std::swap(w.at(r, j), w.at(p, j));
        Rat piv = w.at(r, c);
        for (int j = 0; j <= m.cols; ++j) w.at(r, j) /= piv;
        for (int i = 0; i < w.rows; ++i) {
            if (i == r || w.at(i, c) == 0) continue;
            Rat f = w.at(i, c);
            for (int j = 0; j <= m.cols; ++j) w.at(i, j) -= f * w.at(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < w.rows; ++i)
        if (w.at(i, m.cols) != 0) return std::nullopt;
    std::vector<Rat> x(m.cols, Rat(0));
    for (int i = 0; i < r; ++i) x[pivot_col[i]] = w.at(i, m.cols);
    return x;
}

// Row-style Hermite reduction on the transpose: unimodular row operations
// preserve the row lattice, so the nonzero rows afterwards form a basis.
static IntMat hnf_rows(IntMat w) {
    int r = 0;
    for (int c = 0; c < w.cols && r < w.rows; ++c) {
        // gcd-combine all rows >= r on column c into row r
        int p = -1;
        for (int i = r; i < w.rows; ++i)
            if (w.at(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < w.cols; ++j) std::swap(w.at(r, j), w.at(p, j));
        bool again = true;
        while (again) {
            again = false;
            for (int i = r + 1; i < w.rows; ++i) {
                if (w.at(i, c) == 0) continue;
                // reduce row i against row r; swap when remainder is smaller
                Int q = floor_div(w.at(i, c), w.at(r, c));
                for (int j = 0; j < w.cols; ++j) w.at(i, j) -= q * w.at(r, j);
                if (w.at(i, c) != 0) {
                    for (int j = 0; j < w.cols; ++j) std::swap(w.at(r, j), w.at(i, j));
                    again = true;
                }
            }
        }
        if (w.at(r, c) < 0)
            for (int j = 0; j < w.cols; ++j) w.at(r, j) = -w.at(r, j);
        ++r;
    }
    w.rows = r; // keep only the nonzero rows
    w.a.resize(static_cast<size_t>(r) * w.cols);
    return w;
}

IntMat column_lattice_basis(const IntMat& m) {
    IntMat h = hnf_rows(m.transposed());
    if (h.rows != m.rows)
        throw std::invalid_argument("column_lattice_basis: columns do not span the ambient space");
    return h.transposed();
}

void make_primitive(IntVec& v) {
    Int g = 0;
    for (const Int& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (Int& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

} // namespace perfhom
