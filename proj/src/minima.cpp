#include "perfhom/minima.hpp"

#include "perfhom/bounds.hpp"

#include <algorithm>
#include <thread>

namespace perfhom {

namespace {

// h(x) = sum_i d[i] * (x_i + sum_{j>i} c[i][j] x_j)^2, d[i] > 0 for PD input.
struct LdlSplit {
    int n;
    std::vector<Rat> d;
    std::vector<std::vector<Rat>> c;
};

LdlSplit ldl_split(const SymForm& A) {
    int n = A.dim();
    RatMat w = A.to_mat();
    LdlSplit s{n, std::vector<Rat>(n), std::vector<std::vector<Rat>>(n, std::vector<Rat>(n))};
    for (int i = 0; i < n; ++i) {
        if (w.at(i, i) <= 0) throw std::invalid_argument("shortest_vectors: form not positive definite");
        s.d[i] = w.at(i, i);
        for (int j = i + 1; j < n; ++j) s.c[i][j] = w.at(i, j) / s.d[i];
        for (int k = i + 1; k < n; ++k)
            for (int l = k; l < n; ++l) {
                Rat u = w.at(k, l) - s.d[i] * s.c[i][k] * s.c[i][l];
                w.at(k, l) = u;
                w.at(l, k) = u;
            }
    }
    return s;
}

// Integer range of x with d*(x + c)^2 <= r; empty when r < 0.
bool level_range(const Rat& d, const Rat& c, const Rat& r, Int& lo, Int& hi) {
    if (r < 0) return false;
    Rat rr = r / d;
    const Int& p = c.get_num();
    const Int& q = c.get_den();
    // (q x + p)^2 <= rr * q^2, and the left side is an integer
    Int cap = floor_rat(rr * Rat(q * q));
    if (cap < 0) return false;
    Int s = floor_sqrt(cap);
    lo = ceil_div(-s - p, q);
    hi = floor_div(s - p, q);
    return lo <= hi;
}

struct EnumSink {
    bool keep_all;       // vectors_below mode
    Rat bound;           // current pruning bound
    Rat best;            // best value seen (min mode)
    bool have_best = false;
    std::vector<std::pair<Rat, IntVec>> out;
};

void enum_level(const LdlSplit& s, int i, IntVec& x, const std::vector<Rat>& q_tail, const Rat& used,
                EnumSink& sink) {
    // q_tail[k] = sum_{j>k} c[k][j] x_j for k <= i (computed incrementally below)
    if (i < 0) {
        bool nonzero = false;
        for (const Int& v : x)
            if (v != 0) { nonzero = true; break; }
        if (!nonzero) return;
        Rat h = used;
        if (sink.keep_all) {
            sink.out.emplace_back(h, x);
        } else if (!sink.have_best || h < sink.best) {
            sink.best = h;
            sink.have_best = true;
            sink.bound = h;
            sink.out.clear();
            sink.out.emplace_back(h, x);
        } else if (h == sink.best) {
            sink.out.emplace_back(h, x);
        }
        return;
    }
    Int lo, hi;
    if (!level_range(s.d[i], q_tail[i], sink.bound - used, lo, hi)) return;
    for (Int v = lo; v <= hi; ++v) {
        x[i] = v;
        Rat qi = Rat(v) + q_tail[i];
        Rat used2 = used + s.d[i] * qi * qi;
        if (used2 > sink.bound) continue;
        if (i == 0) {
            IntVec probe = x;
            enum_level(s, -1, probe, q_tail, used2, sink);
            continue;
        }
        std::vector<Rat> tail2 = q_tail;
        for (int k = 0; k < i; ++k) tail2[k] += s.c[k][i] * Rat(v);
        enum_level(s, i - 1, x, tail2, used2, sink);
    }
    x[i] = 0;
}

std::vector<std::pair<Rat, IntVec>> enumerate_upto(const SymForm& A, const Rat& bound, bool keep_all,
                                                   Rat& min_found, int threads) {
    LdlSplit s = ldl_split(A);
    int n = s.n;
    int top = n - 1;
    Int lo, hi;
    EnumSink probe{keep_all, bound, bound, false, {}};
    if (!level_range(s.d[top], Rat(0), bound, lo, hi)) return {};

    auto run_range = [&](const Int& a, const Int& b, EnumSink& sink) {
        IntVec x(n, Int(0));
        for (Int v = a; v <= b; ++v) {
            x[top] = v;
            Rat used = s.d[top] * Rat(v * v);
            if (used > sink.bound) continue;
            if (top == 0) {
                IntVec probe_vec = x;
                enum_level(s, -1, probe_vec, std::vector<Rat>(n, Rat(0)), used, sink);
                continue;
            }
            std::vector<Rat> tail(n, Rat(0));
            for (int k = 0; k < top; ++k) tail[k] = s.c[k][top] * Rat(v);
            enum_level(s, top - 1, x, tail, used, sink);
        }
    };

    std::vector<EnumSink> sinks;
    Int span = hi - lo + 1;
    if (threads > 1 && span >= 2 * threads) {
        int t = threads;
        std::vector<std::pair<Int, Int>> chunks;
        Int step = span / t + 1;
        for (Int a = lo; a <= hi; a += step) chunks.emplace_back(a, std::min(Int(a + step - 1), hi));
        sinks.assign(chunks.size(), EnumSink{keep_all, bound, bound, false, {}});
        std::vector<std::thread> pool;
        for (size_t i = 0; i < chunks.size(); ++i)
            pool.emplace_back([&, i] { run_range(chunks[i].first, chunks[i].second, sinks[i]); });
        for (auto& th : pool) th.join();
    } else {
        sinks.assign(1, EnumSink{keep_all, bound, bound, false, {}});
        run_range(lo, hi, sinks[0]);
    }

    // merge (deterministic regardless of schedule: canonical sort afterwards)
    std::vector<std::pair<Rat, IntVec>> all;
    bool have = false;
    Rat best;
    for (auto& sk : sinks) {
        if (keep_all) {
            all.insert(all.end(), sk.out.begin(), sk.out.end());
        } else if (sk.have_best) {
            if (!have || sk.best < best) {
                best = sk.best;
                have = true;
            }
        }
    }
    if (!keep_all) {
        for (auto& sk : sinks)
            if (sk.have_best && sk.best == best)
                all.insert(all.end(), sk.out.begin(), sk.out.end());
        min_found = best;
        if (!have) all.clear();
    }
    return all;
}

std::vector<IntVec> dedupe_pairs(std::vector<std::pair<Rat, IntVec>>& raw) {
    std::vector<IntVec> vs;
    vs.reserve(raw.size());
    for (auto& [h, v] : raw) {
        canonical_sign(v);
        vs.push_back(std::move(v));
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

} // namespace

MinVecSet shortest_vectors(const SymForm& A, int threads) {
    int n = A.dim();
    Rat bound = A.at(0, 0);
    for (int i = 1; i < n; ++i) bound = std::min(bound, A.at(i, i));
    Rat mu;
    auto raw = enumerate_upto(A, bound, false, mu, threads);
    if (raw.empty()) throw std::logic_error("shortest_vectors: enumeration found nothing under the diagonal bound");
    MinVecSet m;
    m.mu = mu;
    m.vectors = dedupe_pairs(raw);
    // distinct minimal pairs are distinct mod 2, hence at most 2^n - 1 of them
    Int cap = (Int(1) << n) - 1;
    if (Int(m.pair_count()) > cap) throw std::logic_error("shortest_vectors: pair count exceeds 2^n - 1");
    return m;
}

std::vector<IntVec> vectors_below(const SymForm& A, const Rat& bound, int threads) {
    if (!A.is_positive_definite()) throw std::invalid_argument("vectors_below: form not positive definite");
    Rat unused;
    auto raw = enumerate_upto(A, bound, true, unused, threads);
    return dedupe_pairs(raw);
}

bool is_perfect(const SymForm& A) {
    MinVecSet m = shortest_vectors(A);
    int n = A.dim();
    int d = n * (n + 1) / 2;
    RatMat rows(m.pair_count(), d);
    for (int r = 0; r < m.pair_count(); ++r) {
        const IntVec& v = m.vectors[r];
        int c = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) rows.at(r, c++) = Rat(v[i] * v[j]);
    }
    return rank(rows) == d;
}

namespace {

IntVec column(const IntMat& m, int c) {
    IntVec v(m.rows);
    for (int r = 0; r < m.rows; ++r) v[r] = m.at(r, c);
    return v;
}

void set_column(IntMat& m, int c, const IntVec& v) {
    for (int r = 0; r < m.rows; ++r) m.at(r, c) = v[r];
}

// Greedy norm reduction by integer column moves; keeps |det| = 1.
void size_reduce(IntMat& g, const SymForm& A) {
    int n = g.cols;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i < n; ++i) {
            IntVec bi = column(g, i);
            Rat hi = A.evaluate(bi);
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                IntVec bj = column(g, j);
                Rat hj = A.evaluate(bj);
                Int t = round_rat(A.inner(bi, bj) / hj);
                if (t == 0) continue;
                IntVec cand(bi.size());
                for (size_t k = 0; k < bi.size(); ++k) cand[k] = bi[k] - t * bj[k];
                if (A.evaluate(cand) < hi) {
                    bi = cand;
                    hi = A.evaluate(bi);
                    set_column(g, i, bi);
                    improved = true;
                }
            }
        }
    }
}

// Exhaustive search (small n): unimodular matrix from vectors of norm <= cap,
// scanned in ascending norm order.
std::optional<IntMat> exhaustive_basis(const SymForm& A, const Rat& cap) {
    int n = A.dim();
    std::vector<IntVec> pool = vectors_below(A, cap);
    std::stable_sort(pool.begin(), pool.end(), [&](const IntVec& x, const IntVec& y) {
        return A.evaluate(x) < A.evaluate(y);
    });
    IntMat g(n, n);
    std::vector<IntVec> chosen;
    std::function<bool(size_t)> dfs = [&](size_t start) -> bool {
        if (static_cast<int>(chosen.size()) == n) {
            for (int c = 0; c < n; ++c) set_column(g, c, chosen[c]);
            return is_unimodular(g);
        }
        for (size_t i = start; i < pool.size(); ++i) {
            chosen.push_back(pool[i]);
            if (rank_int_vectors(chosen, n) == static_cast<int>(chosen.size()) && dfs(i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (!dfs(0)) return std::nullopt;
    return g;
}

} // namespace

IntMat bounded_basis(const SymForm& A) {
    int n = A.dim();
    if (!A.is_positive_definite()) throw std::invalid_argument("bounded_basis: form not positive definite");
    MinVecSet m = shortest_vectors(A);
    if (rank_int_vectors(m.vectors, n) != n)
        throw std::invalid_argument("bounded_basis: minimal vectors do not span");
    Rat cap = Rat(n * n) * m.mu;

    IntMat cols(n, m.pair_count());
    for (int c = 0; c < m.pair_count(); ++c) set_column(cols, c, m.vectors[c]);

    IntMat g;
    bool have = false;
    IntMat basis = column_lattice_basis(cols);
    if (is_unimodular(basis)) {
        size_reduce(basis, A);
        bool ok = true;
        for (int c = 0; c < n; ++c)
            if (A.evaluate(column(basis, c)) > cap) ok = false;
        if (ok) {
            g = basis;
            have = true;
        }
    }
    if (!have) {
        // the minimal vectors generate a proper sublattice, or reduction
        // stalled above the bound; fall back to direct search when feasible
        if (n > 4)
            throw std::invalid_argument("bounded_basis: reduction exceeded the norm bound and n > 4");
        auto found = exhaustive_basis(A, cap);
        if (!found)
            throw std::invalid_argument("bounded_basis: no unimodular basis within the norm bound");
        g = *found;
    }

    // deterministic presentation: ascending norm, then lex; determinant +1
    std::vector<IntVec> bs;
    for (int c = 0; c < n; ++c) bs.push_back(column(g, c));
    std::sort(bs.begin(), bs.end(), [&](const IntVec& x, const IntVec& y) {
        Rat hx = A.evaluate(x), hy = A.evaluate(y);
        if (hx != hy) return hx < hy;
        return x < y;
    });
    for (int c = 0; c < n; ++c) set_column(g, c, bs[c]);
    if (det(g) == -1)
        for (int r = 0; r < n; ++r) g.at(r, 0) = -g.at(r, 0);

    for (int c = 0; c < n; ++c)
        if (A.evaluate(column(g, c)) > cap)
            throw std::logic_error("bounded_basis: postcondition failed");
    return g;
}

Prop1Report prop1_check(const SymForm& A) {
    int n = A.dim();
    Prop1Report rep;
    rep.g = bounded_basis(A);
    SymForm B = A.act(rep.g);
    MinVecSet m = shortest_vectors(B);
    rep.mu = m.mu;
    Rat cap = Rat(n * n) * m.mu;
    rep.basis_ok = true;
    for (int c = 0; c < n; ++c) {
        IntVec b = column(rep.g, c);
        rep.basis_norms.push_back(A.evaluate(b));
        if (rep.basis_norms.back() > cap) rep.basis_ok = false;
    }
    rep.coord_max.assign(n, Int(0));
    for (const IntVec& v : m.vectors)
        for (int i = 0; i < n; ++i) rep.coord_max[i] = std::max(rep.coord_max[i], Int(abs(v[i])));
    rep.overall_max = 0;
    for (const Int& x : rep.coord_max) rep.overall_max = std::max(rep.overall_max, x);
    rep.bound = a_const(n);
    rep.coords_ok = rep.overall_max <= rep.bound;
    return rep;
}

} // namespace perfhom
