#include "perfhom/torsion.hpp"

#include <algorithm>

namespace perfhom {

void ChainComplexZ::validate() const {
    for (const auto& [k, m] : boundary) {
        if (m.rows != count(k - 1) || m.cols != count(k))
            throw std::invalid_argument("ChainComplexZ: boundary shape mismatch at degree " + std::to_string(k));
    }
}

bool ChainComplexZ::boundary_squares_to_zero() const {
    for (const auto& [k, m] : boundary) {
        auto up = boundary.find(k + 1);
        if (up == boundary.end()) continue;
        IntMat prod = mul(m, up->second);
        for (const Int& x : prod.a)
            if (x != 0) return false;
    }
    return true;
}

namespace {

void swap_rows(IntMat& w, int a, int b) {
    if (a == b) return;
    for (int j = 0; j < w.cols; ++j) std::swap(w.at(a, j), w.at(b, j));
}

void swap_cols(IntMat& w, int a, int b) {
    if (a == b) return;
    for (int i = 0; i < w.rows; ++i) std::swap(w.at(i, a), w.at(i, b));
}

} // namespace

// Direct elimination; fine for small matrices but the entries can blow up
// exponentially with the dimension, so larger inputs take the localized route.
static SnfResult smith_by_elimination(const IntMat& m) {
    IntMat w = m;
    int R = w.rows, C = w.cols;
    SnfResult res;
    int t = 0;
    while (t < R && t < C) {
        // smallest nonzero entry of the trailing block becomes the pivot
        int bi = -1, bj = -1;
        Int best;
        for (int i = t; i < R; ++i)
            for (int j = t; j < C; ++j) {
                if (w.at(i, j) == 0) continue;
                Int v = abs(w.at(i, j));
                if (bi < 0 || v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;
        swap_rows(w, t, bi);
        swap_cols(w, t, bj);
        for (bool clean = false; !clean;) {
            clean = true;
            for (int i = t + 1; i < R; ++i) {
                if (w.at(i, t) == 0) continue;
                Int q = floor_div(w.at(i, t), w.at(t, t));
                for (int j = 0; j < C; ++j) w.at(i, j) -= q * w.at(t, j);
                if (w.at(i, t) != 0) {
                    swap_rows(w, t, i); // strictly smaller pivot
                    clean = false;
                }
            }
            for (int j = t + 1; j < C; ++j) {
                if (w.at(t, j) == 0) continue;
                Int q = floor_div(w.at(t, j), w.at(t, t));
                for (int i = 0; i < R; ++i) w.at(i, j) -= q * w.at(i, t);
                if (w.at(t, j) != 0) {
                    swap_cols(w, t, j);
                    clean = false;
                }
            }
            if (clean) {
                // pivot must divide the remaining block for the chain property
                for (int i = t + 1; i < R && clean; ++i)
                    for (int j = t + 1; j < C && clean; ++j)
                        if (w.at(i, j) % w.at(t, t) != 0) {
                            for (int jj = 0; jj < C; ++jj) w.at(t, jj) += w.at(i, jj);
                            clean = false;
                        }
            }
        }
        res.invariant_factors.push_back(abs(w.at(t, t)));
        ++t;
    }
    return res;
}

namespace {

bool pollard_brent(const Int& n, Int& factor) {
    // Brent's cycle-finding rho with gcds batched through a running product;
    // deterministic parameter sweep keeps results reproducible
    const unsigned long batch = 128;
    for (unsigned long c = 1; c <= 64; ++c) {
        auto step = [&](Int& v) { v = (v * v + c) % n; };
        Int x = 2, y = 2, ys = 2, q = 1, g = 1;
        unsigned long r = 1, spent = 0;
        while (g == 1 && spent < (1ul << 27)) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) step(y);
            for (unsigned long k = 0; k < r && g == 1; k += batch) {
                ys = y;
                unsigned long lim = std::min(batch, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    step(y);
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            spent += r;
            r *= 2;
        }
        if (g == n) {
            // the batch overshot a factor; replay it one step at a time
            g = 1;
            while (g == 1) {
                step(ys);
                Int diff = abs(x - ys);
                if (diff == 0) break;
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g != 1 && g != n) {
            factor = g;
            return true;
        }
    }
    return false;
}

// Distinct prime divisors; false when a cofactor resists splitting.
bool prime_divisors(Int n, std::vector<Int>& primes) {
    n = abs(n);
    for (Int p : {Int(2), Int(3), Int(5)}) {
        if (n % p == 0) {
            primes.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    for (Int p = 7; p * p <= n && p < 100000; p += 2) {
        if (n % p == 0) {
            primes.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    std::vector<Int> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        Int v = stack.back();
        stack.pop_back();
        if (mpz_probab_prime_p(v.get_mpz_t(), 40)) {
            bool seen = false;
            for (const Int& p : primes)
                if (p == v) seen = true;
            if (!seen) primes.push_back(v);
            continue;
        }
        if (mpz_perfect_square_p(v.get_mpz_t())) {
            Int r;
            mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
            stack.push_back(r);
            continue;
        }
        Int f;
        if (!pollard_brent(v, f)) return false;
        stack.push_back(f);
        stack.push_back(Int(v / f));
    }
    std::sort(primes.begin(), primes.end());
    return true;
}

long rat_valuation(const Rat& x, const Int& p) {
    Int tmp;
    long vn = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.get_num().get_mpz_t(), p.get_mpz_t()));
    long vd = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.get_den().get_mpz_t(), p.get_mpz_t()));
    return vn - vd;
}

// Valuations of the invariant factors at one prime: Gaussian elimination over
// the localization, always pivoting on an entry of least p-adic valuation.
// Entry growth stays Cramer-bounded because the arithmetic is plain rational
// elimination.
std::vector<long> local_valuations(const IntMat& m, const Int& p, int rank_hint) {
    RatMat w(m);
    int R = w.rows, C = w.cols;
    std::vector<long> vals;
    for (int t = 0; t < rank_hint; ++t) {
        int bi = -1, bj = -1;
        long best = 0;
        for (int i = t; i < R; ++i)
            for (int j = t; j < C; ++j) {
                if (w.at(i, j) == 0) continue;
                long v = rat_valuation(w.at(i, j), p);
                if (bi < 0 || v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;
        for (int j = 0; j < C; ++j) std::swap(w.at(t, j), w.at(bi, j));
        for (int i = 0; i < R; ++i) std::swap(w.at(i, t), w.at(i, bj));
        vals.push_back(best);
        Rat pivot = w.at(t, t);
        for (int i = t + 1; i < R; ++i) {
            if (w.at(i, t) == 0) continue;
            Rat f = w.at(i, t) / pivot;
            for (int j = t; j < C; ++j) w.at(i, j) -= f * w.at(t, j);
        }
        for (int j = t + 1; j < C; ++j) w.at(t, j) = 0;
    }
    return vals;
}

// Rows and columns of some nonsingular rank-by-rank submatrix.
std::pair<std::vector<int>, std::vector<int>> pivot_submatrix(const IntMat& m) {
    RatMat w(m);
    std::vector<int> rows, cols;
    std::vector<bool> row_used(static_cast<std::size_t>(w.rows), false);
    for (int j = 0; j < w.cols; ++j) {
        int pr = -1;
        for (int i = 0; i < w.rows; ++i)
            if (!row_used[static_cast<std::size_t>(i)] && w.at(i, j) != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        row_used[static_cast<std::size_t>(pr)] = true;
        rows.push_back(pr);
        cols.push_back(j);
        Rat pivot = w.at(pr, j);
        for (int i = 0; i < w.rows; ++i) {
            if (row_used[static_cast<std::size_t>(i)] || w.at(i, j) == 0) continue;
            Rat f = w.at(i, j) / pivot;
            for (int jj = j; jj < w.cols; ++jj) w.at(i, jj) -= f * w.at(pr, jj);
        }
    }
    return {rows, cols};
}

SnfResult smith_by_localization(const IntMat& m) {
    auto [rows, cols] = pivot_submatrix(m);
    int r = static_cast<int>(rows.size());
    SnfResult res;
    if (r == 0) return res;
    IntMat sub(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            sub.at(i, j) = m.at(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
    Int d = abs(det(sub));
    res.invariant_factors.assign(static_cast<std::size_t>(r), Int(1));
    if (d == 1) return res;
    std::vector<Int> primes;
    if (!prime_divisors(d, primes)) return smith_by_elimination(m); // unsplittable minor
    for (const Int& p : primes) {
        std::vector<long> vals = local_valuations(m, p, r);
        // ascending by construction: the i-th pivot valuation is v_p of the
        // i-th invariant factor
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (long e = 0; e < vals[i]; ++e) res.invariant_factors[i] *= p;
    }
    return res;
}

} // namespace

SnfResult smith_normal_form(const IntMat& m) {
    // the direct route is safe while the squaring entry growth stays short
    if (std::min(m.rows, m.cols) <= 3) return smith_by_elimination(m);
    return smith_by_localization(m);
}

Int torsion_card(const SnfResult& s) {
    Int p = 1;
    for (const Int& d : s.invariant_factors) p *= d;
    return p;
}

Int lemma1_bound(const IntMat& m, const std::optional<std::vector<int>>& columns) {
    auto col_sq_norm = [&](int c) {
        Int s = 0;
        for (int r = 0; r < m.rows; ++r) s += m.at(r, c) * m.at(r, c);
        return s;
    };
    auto col_vec = [&](int c) {
        IntVec v(m.rows);
        for (int r = 0; r < m.rows; ++r) v[r] = m.at(r, c);
        return v;
    };
    std::vector<IntVec> all;
    for (int c = 0; c < m.cols; ++c) all.push_back(col_vec(c));
    int full_rank = rank_int_vectors(all, m.rows);

    std::vector<int> chosen;
    if (columns) {
        chosen = *columns;
        std::vector<IntVec> sel;
        for (int c : chosen) {
            if (c < 0 || c >= m.cols) throw std::invalid_argument("lemma1_bound: column index out of range");
            sel.push_back(col_vec(c));
        }
        if (rank_int_vectors(sel, m.rows) != static_cast<int>(sel.size()) ||
            static_cast<int>(sel.size()) != full_rank)
            throw std::invalid_argument("lemma1_bound: selected columns are not a basis of the image span");
    } else {
        std::vector<int> order(m.cols);
        for (int c = 0; c < m.cols; ++c) order[c] = c;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return col_sq_norm(a) < col_sq_norm(b); });
        std::vector<IntVec> sel;
        for (int c : order) {
            if (static_cast<int>(sel.size()) == full_rank) break;
            if (col_sq_norm(c) == 0) continue;
            sel.push_back(col_vec(c));
            if (rank_int_vectors(sel, m.rows) == static_cast<int>(sel.size()))
                chosen.push_back(c);
            else
                sel.pop_back();
        }
    }
    Int prod_sq = 1;
    for (int c : chosen) prod_sq *= col_sq_norm(c);
    return floor_sqrt(prod_sq);
}

Prop3Bound prop3_bound(const ChainComplexZ& c, int k) {
    c.validate();
    if (k < 0 || k > c.max_degree()) throw std::invalid_argument("prop3_bound: degree out of range");
    IntMat d = c.boundary_or_zero(k + 1);
    Prop3Bound r;
    r.a = std::min(Int(c.count(k + 1)), Int(c.count(k)));
    r.b_squared = 0;
    for (int j = 0; j < d.cols; ++j) {
        Int s = 0;
        for (int i = 0; i < d.rows; ++i) s += d.at(i, j) * d.at(i, j);
        r.b_squared = std::max(r.b_squared, s);
    }
    r.b = std::max(Int(1), ceil_sqrt_rat(Rat(r.b_squared)));
    Int bound = 1;
    for (Int i = 0; i < r.a; ++i) bound *= r.b;
    r.bound = bound;
    return r;
}

Homology homology(const ChainComplexZ& c, int k) {
    c.validate();
    if (k < 0) throw std::invalid_argument("homology: negative degree");
    IntMat dk = c.boundary_or_zero(k);
    IntMat dk1 = c.boundary_or_zero(k + 1);
    int rk = rank(RatMat(dk));
    SnfResult s1 = smith_normal_form(dk1);
    Homology h;
    h.betti = Int(c.count(k)) - rk - s1.rank();
    if (h.betti < 0) throw std::invalid_argument("homology: boundary maps are inconsistent (d d != 0?)");
    for (const Int& d : s1.invariant_factors)
        if (d > 1) h.torsion.push_back(d);
    return h;
}

Int card_filtered(const std::vector<Int>& factors, long n) {
    Int out = 1;
    for (Int f : factors) {
        if (f < 0) f = -f;
        if (f == 0) throw std::invalid_argument("card_filtered: zero factor");
        for (Int d = 2; d <= n && f > 1; ++d)
            while (f % d == 0) f /= d;
        out *= f;
    }
    return out;
}

} // namespace perfhom
