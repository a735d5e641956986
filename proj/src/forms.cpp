#include "perfhom/forms.hpp"

#include <algorithm>

namespace perfhom {

SymForm::SymForm(int n) : n_(n), tri_(static_cast<size_t>(n) * (n + 1) / 2) {
    if (n <= 0) throw std::invalid_argument("SymForm: dimension must be positive");
}

SymForm SymForm::identity(int n) {
    SymForm f(n);
    for (int i = 0; i < n; ++i) f.set(i, i, Rat(1));
    return f;
}

SymForm SymForm::from_rows(const std::vector<std::vector<Rat>>& rows) {
    int n = static_cast<int>(rows.size());
    SymForm f(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("SymForm::from_rows: ragged rows");
        for (int j = i; j < n; ++j) {
            if (rows[j][i] != rows[i][j])
                throw std::invalid_argument("SymForm::from_rows: matrix not symmetric");
            f.set(i, j, rows[i][j]);
        }
    }
    return f;
}

size_t SymForm::idx(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::invalid_argument("SymForm: index out of range");
    if (i > j) std::swap(i, j);
    // row-major upper triangle
    return static_cast<size_t>(i) * n_ - static_cast<size_t>(i) * (i - 1) / 2 + (j - i);
}

Rat SymForm::evaluate(const IntVec& v) const {
    if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("evaluate: dimension mismatch");
    Rat s = 0;
    for (int i = 0; i < n_; ++i) {
        if (v[i] == 0) continue;
        s += at(i, i) * Rat(v[i] * v[i]);
        for (int j = i + 1; j < n_; ++j)
            if (v[j] != 0) s += 2 * at(i, j) * Rat(v[i] * v[j]);
    }
    return s;
}

Rat SymForm::inner(const IntVec& v, const IntVec& w) const {
    if (static_cast<int>(v.size()) != n_ || static_cast<int>(w.size()) != n_)
        throw std::invalid_argument("inner: dimension mismatch");
    Rat s = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (v[i] != 0 && w[j] != 0) s += at(i, j) * Rat(v[i] * w[j]);
    return s;
}

Rat SymForm::determinant() const { return det(to_mat()); }

// Symmetric elimination with diagonal pivoting. Exact classification:
// a PSD matrix with zero diagonal entry has a zero row, and any negative
// pivot (or a 2x2 block [[0,b],[b,*]], b != 0) witnesses indefiniteness.
Definiteness SymForm::definiteness() const {
    RatMat w = to_mat();
    int n = n_;
    std::vector<bool> done(n, false);
    int pivots = 0;
    for (;;) {
        int p = -1;
        for (int i = 0; i < n; ++i) {
            if (done[i]) continue;
            if (w.at(i, i) < 0) return Definiteness::indefinite;
            if (w.at(i, i) > 0 && p < 0) p = i;
        }
        if (p < 0) {
            // all remaining diagonal entries are zero
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (!done[i] && !done[j] && w.at(i, j) != 0) return Definiteness::indefinite;
            break;
        }
        Rat inv_piv = 1 / w.at(p, p);
        for (int i = 0; i < n; ++i) {
            if (done[i] || i == p || w.at(i, p) == 0) continue;
            Rat f = w.at(i, p) * inv_piv;
            for (int j = 0; j < n; ++j)
                if (!done[j]) w.at(i, j) -= f * w.at(p, j);
        }
        done[p] = true;
        ++pivots;
    }
    return pivots == n ? Definiteness::positive_definite : Definiteness::positive_semidefinite;
}

SymForm SymForm::scaled(const Rat& c) const {
    SymForm f = *this;
    for (Rat& x : f.tri_) x *= c;
    return f;
}

SymForm SymForm::plus(const SymForm& other, const Rat& coeff) const {
    if (n_ != other.n_) throw std::invalid_argument("plus: dimension mismatch");
    SymForm f = *this;
    for (size_t i = 0; i < tri_.size(); ++i) f.tri_[i] += coeff * other.tri_[i];
    return f;
}

SymForm SymForm::conjugated(const IntMat& g) const {
    if (g.rows != n_ || g.cols != n_) throw std::invalid_argument("act: dimension mismatch");
    RatMat gr(g);
    RatMat m = mul(gr.transposed(), mul(to_mat(), gr));
    SymForm f(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) f.set(i, j, m.at(i, j));
    return f;
}

SymForm SymForm::act(const IntMat& g) const {
    if (!is_unimodular(g)) throw std::invalid_argument("act: matrix not unimodular");
    return conjugated(g);
}

RatMat SymForm::to_mat() const {
    RatMat m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m.at(i, j) = at(i, j);
    return m;
}

SymForm SymForm::primitive() const {
    Int num_gcd = 0, den_lcm = 1;
    for (const Rat& x : tri_) {
        if (x == 0) continue;
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), x.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den().get_mpz_t());
    }
    if (num_gcd == 0) return *this;
    return scaled(Rat(den_lcm, num_gcd));
}

bool SymForm::operator<(const SymForm& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    for (size_t i = 0; i < tri_.size(); ++i)
        if (tri_[i] != o.tri_[i]) return tri_[i] < o.tri_[i];
    return false;
}

SymForm rank_one(const IntVec& v) {
    SymForm f(static_cast<int>(v.size()));
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = i; j < v.size(); ++j)
            f.set(static_cast<int>(i), static_cast<int>(j), Rat(v[i] * v[j]));
    return f;
}

} // namespace perfhom
