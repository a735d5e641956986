#include "perfhom/voronoi.hpp"

#include "perfhom/bounds.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace perfhom {

namespace {

int sym_dim(int n) { return n * (n + 1) / 2; }

// Upper-triangle coordinates of v v^t (row-major, i <= j). With a dual
// vector r, sum_{i<=j} r[ij] * x[ij] equals v^t R v for the symmetric R
// having R_ii = r[ii] and R_ij = r[ij] / 2.
IntVec vec_rank_one_coords(const IntVec& v) {
    int n = static_cast<int>(v.size());
    IntVec x(static_cast<size_t>(sym_dim(n)));
    size_t t = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) x[t++] = v[static_cast<size_t>(i)] * v[static_cast<size_t>(j)];
    return x;
}

SymForm functional_to_form(const IntVec& r, int n) {
    SymForm R(n);
    size_t t = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            if (i == j) R.set(i, j, Rat(r[t]));
            else R.set(i, j, Rat(r[t]) / 2);
            ++t;
        }
    return R;
}

std::vector<IntVec> canonical_pairs(std::vector<IntVec> vs) {
    for (auto& v : vs) canonical_sign(v);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

std::string key_of(const std::vector<IntVec>& vs) {
    std::ostringstream os;
    for (const auto& v : vs) {
        for (const auto& x : v) os << x << ',';
        os << ';';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Double description: extreme rays of {y : <rays[i], y> >= 0 for all i},
// which are the facet normals of the full-dimensional cone spanned by rays.
// ---------------------------------------------------------------------------

struct DualDesc {
    std::vector<IntVec> normals;
    std::vector<std::uint64_t> incidence; // bit i set iff <normal, rays[i]> == 0
};

DualDesc dual_description(const std::vector<IntVec>& rays) {
    const size_t m = rays.size();
    if (m == 0 || m > 63) throw std::logic_error("dual_description: unsupported ray count");
    const size_t d = rays[0].size();

    std::vector<size_t> init;
    {
        std::vector<IntVec> acc;
        for (size_t i = 0; i < m && init.size() < d; ++i) {
            acc.push_back(rays[i]);
            if (rank_int_vectors(acc, static_cast<int>(d)) == static_cast<int>(acc.size()))
                init.push_back(i);
            else
                acc.pop_back();
        }
    }
    if (init.size() != d) throw std::invalid_argument("dual_description: rays do not span the space");

    // Dual basis of the initial independent subset: columns of M^{-1}.
    RatMat M(static_cast<int>(d), static_cast<int>(d));
    for (size_t r = 0; r < d; ++r)
        for (size_t c = 0; c < d; ++c) M.at(static_cast<int>(r), static_cast<int>(c)) = Rat(rays[init[r]][c]);
    auto Minv = inverse(M);
    if (!Minv) throw std::logic_error("dual_description: singular initial basis");

    std::vector<IntVec> cur;
    for (size_t j = 0; j < d; ++j) {
        Int den = 1;
        for (size_t i = 0; i < d; ++i) {
            Int q = Minv->at(static_cast<int>(i), static_cast<int>(j)).get_den();
            den = den / gcd(den, q) * q;
        }
        IntVec y(d);
        for (size_t i = 0; i < d; ++i) {
            Rat e = Minv->at(static_cast<int>(i), static_cast<int>(j)) * Rat(den);
            y[i] = e.get_num();
        }
        make_primitive(y);
        cur.push_back(std::move(y));
    }

    auto zeroset = [&](const IntVec& y) {
        std::uint64_t z = 0;
        for (size_t i = 0; i < m; ++i)
            if (dot(rays[i], y) == 0) z |= (1ull << i);
        return z;
    };

    std::vector<std::uint64_t> curZ;
    curZ.reserve(cur.size());
    for (const auto& y : cur) curZ.push_back(zeroset(y));

    std::uint64_t processed = 0;
    for (size_t i : init) processed |= (1ull << i);

    for (size_t c = 0; c < m; ++c) {
        if (processed & (1ull << c)) continue;
        const IntVec& a = rays[c];
        std::vector<Int> s(cur.size());
        bool any_neg = false;
        for (size_t k = 0; k < cur.size(); ++k) {
            s[k] = dot(a, cur[k]);
            if (s[k] < 0) any_neg = true;
        }
        if (any_neg) {
            std::vector<IntVec> next;
            std::vector<std::uint64_t> nextZ;
            for (size_t k = 0; k < cur.size(); ++k)
                if (s[k] >= 0) {
                    next.push_back(cur[k]);
                    nextZ.push_back(curZ[k]);
                }
            for (size_t p = 0; p < cur.size(); ++p) {
                if (s[p] <= 0) continue;
                for (size_t q = 0; q < cur.size(); ++q) {
                    if (s[q] >= 0) continue;
                    // combinatorial adjacency: no third ray's zero set contains
                    // the common zero set (over processed constraints)
                    std::uint64_t zz = curZ[p] & curZ[q] & processed;
                    bool adjacent = true;
                    for (size_t r = 0; r < cur.size(); ++r) {
                        if (r == p || r == q) continue;
                        if ((curZ[r] & processed & zz) == zz) {
                            adjacent = false;
                            break;
                        }
                    }
                    if (!adjacent) continue;
                    IntVec y(d);
                    for (size_t i = 0; i < d; ++i) y[i] = s[p] * cur[q][i] - s[q] * cur[p][i];
                    make_primitive(y);
                    next.push_back(y);
                    nextZ.push_back(zeroset(y));
                }
            }
            cur = std::move(next);
            curZ = std::move(nextZ);
        }
        processed |= (1ull << c);
    }

    for (size_t k = 0; k < cur.size(); ++k)
        for (size_t i = 0; i < m; ++i)
            if (dot(rays[i], cur[k]) < 0) throw std::logic_error("dual_description: negative incidence");

    return {std::move(cur), std::move(curZ)};
}

// Facets of the cone spanned by the given x-vectors, computed inside their
// linear span. Returns the incidence subsets, plus ambient normals when the
// cone is full-dimensional.
struct ConeFacets {
    std::vector<std::vector<size_t>> subsets;
    std::vector<IntVec> ambient_normals; // nonempty only when full-dimensional
};

ConeFacets cone_facets_of(const std::vector<IntVec>& xs) {
    ConeFacets out;
    const size_t m = xs.size();
    const size_t D = xs[0].size();
    const int d = rank_int_vectors(xs, static_cast<int>(D));
    if (d <= 1) return out; // a single ray has no proper positive-dimensional faces

    std::vector<IntVec> rays_d;
    bool full = (static_cast<size_t>(d) == D);
    if (full) {
        rays_d = xs;
    } else {
        // Rational row basis of the span, then coordinates of each ray in it.
        std::vector<std::vector<Rat>> basis;
        std::vector<int> pivots;
        for (const auto& x : xs) {
            std::vector<Rat> cand(D);
            for (size_t i = 0; i < D; ++i) cand[i] = Rat(x[i]);
            for (size_t b = 0; b < basis.size(); ++b) {
                Rat f = cand[static_cast<size_t>(pivots[b])];
                if (f != 0)
                    for (size_t i = 0; i < D; ++i) cand[i] -= f * basis[b][i];
            }
            int p = -1;
            for (size_t i = 0; i < D; ++i)
                if (cand[i] != 0) {
                    p = static_cast<int>(i);
                    break;
                }
            if (p < 0) continue;
            Rat inv = Rat(1) / cand[static_cast<size_t>(p)];
            for (size_t i = 0; i < D; ++i) cand[i] *= inv;
            basis.push_back(std::move(cand));
            pivots.push_back(p);
            if (static_cast<int>(basis.size()) == d) break;
        }
        RatMat E(static_cast<int>(D), d);
        for (int j = 0; j < d; ++j)
            for (size_t i = 0; i < D; ++i) E.at(static_cast<int>(i), j) = basis[static_cast<size_t>(j)][i];
        for (const auto& x : xs) {
            std::vector<Rat> xr(D);
            for (size_t i = 0; i < D; ++i) xr[i] = Rat(x[i]);
            auto c = solve(E, xr);
            if (!c) throw std::logic_error("cone_facets: ray outside its own span");
            Int den = 1;
            for (const Rat& e : *c) {
                Int q = e.get_den();
                den = den / gcd(den, q) * q;
            }
            IntVec ic(static_cast<size_t>(d));
            for (int i = 0; i < d; ++i) {
                Rat e = (*c)[static_cast<size_t>(i)] * Rat(den);
                ic[static_cast<size_t>(i)] = e.get_num();
            }
            make_primitive(ic);
            rays_d.push_back(std::move(ic));
        }
    }

    DualDesc dd = dual_description(rays_d);
    std::vector<std::pair<std::vector<size_t>, size_t>> tagged;
    for (size_t k = 0; k < dd.normals.size(); ++k) {
        std::vector<size_t> sub;
        for (size_t i = 0; i < m; ++i)
            if (dd.incidence[k] & (1ull << i)) sub.push_back(i);
        if (sub.size() < static_cast<size_t>(d - 1))
            throw std::logic_error("cone_facets: facet with too few incident rays");
        tagged.push_back({std::move(sub), k});
    }
    std::sort(tagged.begin(), tagged.end());
    for (auto& [sub, k] : tagged) {
        out.subsets.push_back(std::move(sub));
        if (full) out.ambient_normals.push_back(dd.normals[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Backtracking search for unimodular maps carrying one +/- pair set onto
// another while preserving a fixed bilinear product on each side.
// ---------------------------------------------------------------------------

using InnerFn = std::function<Rat(const IntVec&, const IntVec&)>;

void transporter_search(const std::vector<IntVec>& S1, const InnerFn& in1,
                        const std::vector<IntVec>& S2, const InnerFn& in2, int n,
                        bool find_all, int want_det,
                        const std::function<bool(const IntMat&)>& accept,
                        std::vector<IntMat>& out) {
    if (S1.size() != S2.size() || S1.empty()) return;

    std::vector<size_t> piv;
    {
        std::vector<IntVec> acc;
        for (size_t i = 0; i < S1.size() && static_cast<int>(piv.size()) < n; ++i) {
            acc.push_back(S1[i]);
            if (rank_int_vectors(acc, n) == static_cast<int>(acc.size()))
                piv.push_back(i);
            else
                acc.pop_back();
        }
    }
    if (static_cast<int>(piv.size()) < n) return;

    RatMat V(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) V.at(i, j) = Rat(S1[piv[static_cast<size_t>(j)]][static_cast<size_t>(i)]);
    auto Vinv = inverse(V);
    if (!Vinv) return;

    std::vector<Rat> diag2(S2.size());
    for (size_t t = 0; t < S2.size(); ++t) diag2[t] = in2(S2[t], S2[t]);

    std::vector<IntVec> img(static_cast<size_t>(n));
    bool stop = false;

    std::function<void(int)> rec = [&](int level) {
        if (stop) return;
        if (level == n) {
            RatMat W(n, n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) W.at(i, j) = Rat(img[static_cast<size_t>(j)][static_cast<size_t>(i)]);
            RatMat Hr = mul(W, *Vinv);
            IntMat H(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (Hr.at(i, j).get_den() != 1) return;
                    H.at(i, j) = Hr.at(i, j).get_num();
                }
            if (!is_unimodular(H)) return;
            if (want_det != 0 && det(H) != want_det) return;
            if (!accept(H)) return;
            out.push_back(H);
            if (!find_all) stop = true;
            return;
        }
        const IntVec& v = S1[piv[static_cast<size_t>(level)]];
        Rat dv = in1(v, v);
        for (size_t t = 0; t < S2.size(); ++t) {
            if (diag2[t] != dv) continue;
            for (int sgn = 0; sgn < 2; ++sgn) {
                IntVec cand = sgn ? negated(S2[t]) : S2[t];
                bool ok = true;
                for (int j = 0; j < level; ++j)
                    if (in2(cand, img[static_cast<size_t>(j)]) !=
                        in1(v, S1[piv[static_cast<size_t>(j)]])) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                img[static_cast<size_t>(level)] = std::move(cand);
                rec(level + 1);
                if (stop) return;
            }
        }
    };
    rec(0);
}

// (sum_{v in S} v v^t)^{-1} as a symmetric form; the product it defines is
// preserved by any unimodular map between pair sets, which drives the pruning.
SymForm pair_gram(const std::vector<IntVec>& S) {
    int n = static_cast<int>(S[0].size());
    RatMat B(n, n);
    for (const auto& v : S)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                B.at(i, j) += Rat(v[static_cast<size_t>(i)] * v[static_cast<size_t>(j)]);
    auto Q = inverse(B);
    if (!Q) throw std::invalid_argument("pair set does not span the space");
    std::vector<std::vector<Rat>> rows(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = Q->at(i, j);
    return SymForm::from_rows(rows);
}

std::vector<IntMat> pair_set_maps(const std::vector<IntVec>& S1, const std::vector<IntVec>& S2,
                                  bool find_all, int want_det) {
    std::vector<IntMat> out;
    if (S1.size() != S2.size() || S1.empty()) return out;
    int n = static_cast<int>(S1[0].size());
    SymForm Q1 = pair_gram(S1), Q2 = pair_gram(S2);

    std::vector<Rat> d1, d2;
    for (const auto& v : S1) d1.push_back(Q1.evaluate(v));
    for (const auto& w : S2) d2.push_back(Q2.evaluate(w));
    std::sort(d1.begin(), d1.end());
    std::sort(d2.begin(), d2.end());
    if (d1 != d2) return out;

    std::set<IntVec> set2(S2.begin(), S2.end());
    auto accept = [&](const IntMat& H) {
        for (const auto& v : S1) {
            IntVec w = apply(H, v);
            canonical_sign(w);
            if (!set2.count(w)) return false;
        }
        return true;
    };
    InnerFn in1 = [&](const IntVec& a, const IntVec& b) { return Q1.inner(a, b); };
    InnerFn in2 = [&](const IntVec& a, const IntVec& b) { return Q2.inner(a, b); };
    transporter_search(S1, in1, S2, in2, n, find_all, want_det, accept, out);
    return out;
}

// Spanning candidate vectors for a positive definite form: minimal vectors,
// extended by doubling the bound until they span Q^n.
std::vector<IntVec> spanning_vectors(const SymForm& A, const MinVecSet& mv) {
    int n = A.dim();
    std::vector<IntVec> S = mv.vectors;
    Rat bound = mv.mu;
    int guard = 0;
    while (rank_int_vectors(S, n) < n) {
        bound *= 2;
        S = vectors_below(A, bound);
        if (++guard > 64) throw std::logic_error("spanning_vectors: failed to reach full rank");
    }
    return S;
}

// ---------------------------------------------------------------------------
// Orientation bookkeeping: a rational basis of the linear span of a cell's
// rank-one forms, plus coordinate extraction for vectors in that span.
// ---------------------------------------------------------------------------

struct SpanBasis {
    std::vector<size_t> gen_idx; // generators whose x-vectors form the basis
    std::vector<int> pivot_rows;
    RatMat Pinv;
    int b = 0;
};

SpanBasis make_span_basis(const std::vector<IntVec>& gens) {
    int n = static_cast<int>(gens[0].size());
    int D = sym_dim(n);
    SpanBasis sb;
    std::vector<IntVec> xs;
    std::vector<IntVec> acc;
    for (size_t i = 0; i < gens.size(); ++i) {
        IntVec x = vec_rank_one_coords(gens[i]);
        acc.push_back(x);
        if (rank_int_vectors(acc, D) == static_cast<int>(acc.size())) {
            sb.gen_idx.push_back(i);
            xs.push_back(std::move(x));
        } else {
            acc.pop_back();
        }
    }
    sb.b = static_cast<int>(xs.size());

    // pivot rows making the D x b column matrix square invertible
    std::vector<std::vector<Rat>> rows;
    for (int r = 0; r < D; ++r) {
        std::vector<Rat> row(static_cast<size_t>(sb.b));
        for (int j = 0; j < sb.b; ++j) row[static_cast<size_t>(j)] = Rat(xs[static_cast<size_t>(j)][static_cast<size_t>(r)]);
        rows.push_back(row);
        RatMat T(static_cast<int>(rows.size()), sb.b);
        for (size_t i = 0; i < rows.size(); ++i)
            for (int j = 0; j < sb.b; ++j) T.at(static_cast<int>(i), j) = rows[i][static_cast<size_t>(j)];
        if (rank(T) == static_cast<int>(rows.size()))
            sb.pivot_rows.push_back(r);
        else
            rows.pop_back();
        if (static_cast<int>(rows.size()) == sb.b) break;
    }
    if (static_cast<int>(sb.pivot_rows.size()) != sb.b)
        throw std::logic_error("make_span_basis: no invertible row selection");
    RatMat P(sb.b, sb.b);
    for (int i = 0; i < sb.b; ++i)
        for (int j = 0; j < sb.b; ++j)
            P.at(i, j) = Rat(xs[static_cast<size_t>(j)][static_cast<size_t>(sb.pivot_rows[static_cast<size_t>(i)])]);
    auto Pi = inverse(P);
    if (!Pi) throw std::logic_error("make_span_basis: pivot block not invertible");
    sb.Pinv = *Pi;
    return sb;
}

std::vector<Rat> coords_in(const SpanBasis& sb, const IntVec& x) {
    std::vector<Rat> xr(static_cast<size_t>(sb.b));
    for (int i = 0; i < sb.b; ++i) xr[static_cast<size_t>(i)] = Rat(x[static_cast<size_t>(sb.pivot_rows[static_cast<size_t>(i)])]);
    std::vector<Rat> c(static_cast<size_t>(sb.b));
    for (int i = 0; i < sb.b; ++i) {
        Rat s = 0;
        for (int j = 0; j < sb.b; ++j) s += sb.Pinv.at(i, j) * xr[static_cast<size_t>(j)];
        c[static_cast<size_t>(i)] = s;
    }
    return c;
}

// Determinant of the action X -> h X h^t restricted to the span of the
// cell's rank-one forms (always +-1 for stabilizer elements).
Rat induced_span_det(const IntMat& h, const std::vector<IntVec>& gens, const SpanBasis& sb) {
    RatMat T(sb.b, sb.b);
    for (int j = 0; j < sb.b; ++j) {
        IntVec hv = apply(h, gens[sb.gen_idx[static_cast<size_t>(j)]]);
        auto c = coords_in(sb, vec_rank_one_coords(hv));
        for (int i = 0; i < sb.b; ++i) T.at(i, j) = c[static_cast<size_t>(i)];
    }
    return det(T);
}

} // namespace

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

SymForm initial_form(int n) {
    if (n < 2) throw std::invalid_argument("initial_form: dimension must be at least 2");
    SymForm A(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) A.set(i, j, i == j ? Rat(2) : Rat(1));
    return A;
}

std::vector<Facet> facets(const PerfectFormRecord& P) {
    int n = P.form.dim();
    std::vector<IntVec> xs;
    for (const auto& v : P.minvecs.vectors) xs.push_back(vec_rank_one_coords(v));
    if (rank_int_vectors(xs, sym_dim(n)) != sym_dim(n))
        throw std::invalid_argument("facets: form is not perfect");
    ConeFacets cf = cone_facets_of(xs);
    std::vector<Facet> out;
    for (size_t k = 0; k < cf.subsets.size(); ++k)
        out.push_back({functional_to_form(cf.ambient_normals[k], n), cf.subsets[k]});
    Int cap = f_const(sym_dim(n) - 1, n);
    if (Int(static_cast<long>(out.size())) > cap)
        throw std::logic_error("facets: count exceeds the face-count bound");
    return out;
}

SymForm neighbor(const PerfectFormRecord& P, const Facet& f, int threads) {
    const SymForm& A = P.form;
    const SymForm& R = f.functional;
    const Rat mu = P.minvecs.mu;

    std::set<IntVec> support;
    for (size_t idx : f.support) support.insert(P.minvecs.vectors[idx]);
    if (support.empty()) throw std::invalid_argument("neighbor: empty facet support");

    auto has_new = [&](const MinVecSet& mv) {
        for (const auto& v : mv.vectors)
            if (!support.count(v)) return true;
        return false;
    };

    Rat lo = 0;
    Rat trial = 1;
    std::optional<Rat> hi; // a rho where positive definiteness fails
    int steps = 0;
    Rat rho_star;

    while (true) {
        if (++steps > 4096) throw std::logic_error("neighbor: search failed to converge");
        SymForm At = A.plus(R, trial);
        if (At.definiteness() != Definiteness::positive_definite) {
            hi = trial;
            trial = (lo + *hi) / 2;
            continue;
        }
        MinVecSet mv = shortest_vectors(At, threads);
        if (mv.mu == mu) {
            if (has_new(mv)) {
                rho_star = trial;
                break;
            }
            lo = trial;
            trial = hi ? Rat((lo + *hi) / 2) : Rat(trial * 2);
            continue;
        }
        if (mv.mu > mu) throw std::logic_error("neighbor: minimum increased along facet direction");
        // Some vectors dipped below mu; pull the trial back to the largest rho
        // at which all of them are still >= mu. That value is >= rho*.
        bool first = true;
        Rat best;
        for (const auto& w : mv.vectors) {
            Rat rw = R.evaluate(w);
            if (rw >= 0) throw std::logic_error("neighbor: dipping vector with nonnegative slope");
            Rat cand = (mu - A.evaluate(w)) / rw;
            if (first || cand < best) {
                best = cand;
                first = false;
            }
        }
        trial = best;
    }

    SymForm out = A.plus(R, rho_star).primitive();
    if (!is_perfect(out)) throw std::logic_error("neighbor: contiguous form is not perfect");
    return out;
}

std::optional<IntMat> is_equivalent(const SymForm& A, const SymForm& B) {
    if (A.dim() != B.dim()) return std::nullopt;
    if (!A.is_positive_definite() || !B.is_positive_definite())
        throw std::invalid_argument("is_equivalent: both forms must be positive definite");
    if (A.determinant() != B.determinant()) return std::nullopt;

    MinVecSet ma = shortest_vectors(A), mb = shortest_vectors(B);
    if (ma.mu != mb.mu || ma.pair_count() != mb.pair_count()) return std::nullopt;

    std::vector<IntVec> SB = spanning_vectors(B, mb);
    std::vector<IntVec> SA = spanning_vectors(A, ma);
    if (SA.size() != SB.size()) return std::nullopt;

    std::vector<Rat> na, nb;
    for (const auto& v : SA) na.push_back(A.evaluate(v));
    for (const auto& v : SB) nb.push_back(B.evaluate(v));
    std::sort(na.begin(), na.end());
    std::sort(nb.begin(), nb.end());
    if (na != nb) return std::nullopt;

    // g with g^t A g = B maps vectors of B to vectors of A and turns
    // B-products into A-products.
    std::vector<IntMat> found;
    auto accept = [&](const IntMat& H) { return A.conjugated(H) == B; };
    InnerFn in1 = [&](const IntVec& a, const IntVec& b) { return B.inner(a, b); };
    InnerFn in2 = [&](const IntVec& a, const IntVec& b) { return A.inner(a, b); };
    transporter_search(SB, in1, SA, in2, A.dim(), false, 0, accept, found);
    if (found.empty()) return std::nullopt;
    return found.front();
}

std::vector<IntMat> form_automorphisms(const SymForm& A) {
    if (!A.is_positive_definite())
        throw std::invalid_argument("form_automorphisms: form must be positive definite");
    MinVecSet mv = shortest_vectors(A);
    std::vector<IntVec> S = spanning_vectors(A, mv);
    std::vector<IntMat> out;
    auto accept = [&](const IntMat& H) { return A.conjugated(H) == A; };
    InnerFn in = [&](const IntVec& a, const IntVec& b) { return A.inner(a, b); };
    transporter_search(S, in, S, in, A.dim(), true, 0, accept, out);
    return out;
}

PerfectFormRecord make_record(const SymForm& A, int index, int threads) {
    PerfectFormRecord rec;
    rec.form = A.primitive();
    if (!is_perfect(rec.form)) throw std::invalid_argument("make_record: form is not perfect");
    rec.minvecs = shortest_vectors(rec.form, threads);
    rec.det = rec.form.determinant();
    rec.aut_order = Int(static_cast<long>(form_automorphisms(rec.form).size()));
    rec.index = index;
    return rec;
}

std::vector<PerfectFormRecord> enumerate_perfect(int N, int threads, bool allow_n6) {
    int cap = allow_n6 ? 6 : 5;
    if (N < 2 || N > cap) throw std::invalid_argument("enumerate_perfect: dimension out of supported range");

    std::vector<PerfectFormRecord> reg;
    reg.push_back(make_record(initial_form(N), 0, threads));
    std::queue<int> todo;
    todo.push(0);

    while (!todo.empty()) {
        PerfectFormRecord rec = reg[static_cast<size_t>(todo.front())];
        todo.pop();
        for (const Facet& f : facets(rec)) {
            SymForm B = neighbor(rec, f, threads);
            bool known = false;
            for (const auto& r : reg)
                if (is_equivalent(r.form, B)) {
                    known = true;
                    break;
                }
            if (!known) {
                int idx = static_cast<int>(reg.size());
                reg.push_back(make_record(B, idx, threads));
                todo.push(idx);
            }
        }
    }
    return reg;
}

std::vector<std::vector<std::size_t>> cell_facets(const std::vector<IntVec>& generators) {
    std::vector<IntVec> xs;
    for (const auto& v : generators) xs.push_back(vec_rank_one_coords(v));
    return cone_facets_of(xs).subsets;
}

std::optional<IntMat> cell_equivalence(const std::vector<IntVec>& S1,
                                       const std::vector<IntVec>& S2, GroupMode mode) {
    auto c1 = canonical_pairs(S1), c2 = canonical_pairs(S2);
    auto maps = pair_set_maps(c1, c2, false, mode == GroupMode::SL ? 1 : 0);
    if (maps.empty()) return std::nullopt;
    return maps.front();
}

std::vector<IntMat> cell_stabilizer_elements(const std::vector<IntVec>& S) {
    auto c = canonical_pairs(S);
    return pair_set_maps(c, c, true, 0);
}

Cell make_cell(std::vector<IntVec> generators, GroupMode mode) {
    Cell c;
    c.generators = canonical_pairs(std::move(generators));
    if (c.generators.empty()) throw std::invalid_argument("make_cell: empty generator set");
    int n = static_cast<int>(c.generators[0].size());
    std::vector<IntVec> xs;
    for (const auto& v : c.generators) xs.push_back(vec_rank_one_coords(v));
    c.dim = rank_int_vectors(xs, sym_dim(n)) - 1;
    c.in_boundary = rank_int_vectors(c.generators, n) < n;
    if (c.in_boundary) {
        c.stabilizer_order = 0;
        c.orientation_faithful = false;
        return c;
    }
    auto [order, faithful] = stabilizer(c, mode);
    c.stabilizer_order = order;
    c.orientation_faithful = faithful;
    return c;
}

std::pair<Int, bool> stabilizer(const Cell& cell, GroupMode mode) {
    auto elems = cell_stabilizer_elements(cell.generators);
    SpanBasis sb = make_span_basis(cell.generators);
    Int order = 0;
    bool faithful = true;
    for (const auto& h : elems) {
        if (mode == GroupMode::SL && det(h) != 1) continue;
        order += 1;
        if (induced_span_det(h, cell.generators, sb) != 1) faithful = false;
    }
    return {order, faithful};
}

ChainComplexZ build_complex(int N, GroupMode mode, int threads) {
    if (N < 2 || N > 4) throw std::invalid_argument("build_complex: dimension out of supported range");
    const int D = sym_dim(N);

    auto classes = enumerate_perfect(N, threads);

    struct FaceRec {
        std::vector<IntVec> gens;
        int dim = 0;
        bool boundary = false;
        std::vector<std::string> facet_keys;
        int orbit = -1;          // index into orbit table of its dimension
        IntMat transporter;      // orbit representative -> this face
    };
    std::map<std::string, FaceRec> faces;
    std::queue<std::string> work;

    auto add_face = [&](std::vector<IntVec> gens) {
        gens = canonical_pairs(std::move(gens));
        std::string key = key_of(gens);
        if (faces.count(key)) return key;
        FaceRec fr;
        std::vector<IntVec> xs;
        for (const auto& v : gens) xs.push_back(vec_rank_one_coords(v));
        fr.dim = rank_int_vectors(xs, D) - 1;
        fr.boundary = rank_int_vectors(gens, N) < N;
        fr.gens = std::move(gens);
        bool expand = !fr.boundary;
        faces.emplace(key, std::move(fr));
        if (expand) work.push(key);
        return key;
    };

    for (const auto& rec : classes) add_face(rec.minvecs.vectors);

    while (!work.empty()) {
        std::string key = work.front();
        work.pop();
        FaceRec& fr = faces.at(key);
        auto subs = cell_facets(fr.gens);
        if (Int(static_cast<long>(subs.size())) > f_const(fr.dim, N))
            throw std::logic_error("build_complex: facet count exceeds the bound");
        std::vector<std::string> fkeys;
        for (const auto& sub : subs) {
            std::vector<IntVec> gs;
            for (size_t i : sub) gs.push_back(fr.gens[i]);
            std::string fk = add_face(std::move(gs));
            if (faces.at(fk).dim != fr.dim - 1)
                throw std::logic_error("build_complex: facet dimension mismatch");
            fkeys.push_back(std::move(fk));
        }
        faces.at(key).facet_keys = std::move(fkeys);
    }

    // Orbit reduction per dimension, in deterministic key order.
    struct Orbit {
        std::string rep_key;
        std::string fingerprint;
        std::vector<IntMat> stab; // full GL stabilizer of the representative
        Int order = 0;            // in the chosen group
        bool faithful = true;
        SpanBasis sb;
        int sigma_index = -1;     // position among surviving cells of its dimension
    };
    std::map<int, std::vector<Orbit>> orbits;

    auto fingerprint_of = [&](const FaceRec& fr) {
        SymForm Q = pair_gram(fr.gens);
        std::vector<Rat> diag;
        for (const auto& v : fr.gens) diag.push_back(Q.evaluate(v));
        std::sort(diag.begin(), diag.end());
        std::ostringstream os;
        os << fr.gens.size();
        for (const auto& d : diag) os << '|' << rat_to_string(d);
        return os.str();
    };

    for (auto& [key, fr] : faces) {
        if (fr.boundary) continue;
        std::string fp = fingerprint_of(fr);
        auto& dimOrbits = orbits[fr.dim];
        bool placed = false;
        for (size_t oi = 0; oi < dimOrbits.size(); ++oi) {
            if (dimOrbits[oi].fingerprint != fp) continue;
            auto h = cell_equivalence(faces.at(dimOrbits[oi].rep_key).gens, fr.gens, mode);
            if (h) {
                fr.orbit = static_cast<int>(oi);
                fr.transporter = *h;
                placed = true;
                break;
            }
        }
        if (!placed) {
            Orbit ob;
            ob.rep_key = key;
            ob.fingerprint = fp;
            ob.stab = cell_stabilizer_elements(fr.gens);
            ob.sb = make_span_basis(fr.gens);
            bool faithful = true;
            Int order = 0;
            for (const auto& h : ob.stab) {
                if (mode == GroupMode::SL && det(h) != 1) continue;
                order += 1;
                if (induced_span_det(h, fr.gens, ob.sb) != 1) faithful = false;
            }
            ob.order = order;
            ob.faithful = faithful;
            fr.orbit = static_cast<int>(dimOrbits.size());
            fr.transporter = IntMat::identity(N);
            dimOrbits.push_back(std::move(ob));
        }
    }

    // Surviving cells and labels.
    ChainComplexZ cc;
    cc.n = N;
    cc.group = (mode == GroupMode::SL) ? "sl" : "gl";

    int min_deg = -1, max_deg = -1;
    for (auto& [k, obs] : orbits) {
        int count = 0;
        for (auto& ob : obs)
            if (ob.faithful) ob.sigma_index = count++;
        if (count > 0) {
            if (Int(count) > c_const(k, N))
                throw std::logic_error("build_complex: orbit count exceeds the bound");
            if (min_deg < 0 || k < min_deg) min_deg = k;
            if (k > max_deg) max_deg = k;
        }
    }
    if (min_deg < 0) return cc; // nothing survives

    for (int k = min_deg; k <= max_deg; ++k) {
        int count = 0;
        std::vector<std::string> labs;
        auto it = orbits.find(k);
        if (it != orbits.end())
            for (auto& ob : it->second)
                if (ob.faithful) {
                    std::ostringstream os;
                    os << 'd' << k << '_' << count;
                    labs.push_back(os.str());
                    ++count;
                }
        cc.cell_counts[k] = count;
        cc.labels[k] = std::move(labs);
    }

    // Signed boundary maps on the representatives.
    for (int k = min_deg; k <= max_deg; ++k) {
        IntMat bd(cc.count(k - 1), cc.count(k));
        auto it = orbits.find(k);
        if (it != orbits.end()) {
            for (auto& ob : it->second) {
                if (!ob.faithful) continue;
                const FaceRec& rep = faces.at(ob.rep_key);
                IntVec interior(static_cast<size_t>(D));
                for (const auto& v : rep.gens) {
                    IntVec x = vec_rank_one_coords(v);
                    for (size_t i = 0; i < x.size(); ++i) interior[i] += x[i];
                }
                auto u_coords = coords_in(ob.sb, interior);
                for (const std::string& fk : rep.facet_keys) {
                    const FaceRec& facet = faces.at(fk);
                    if (facet.boundary) continue;
                    const Orbit& tau = orbits.at(facet.dim)[static_cast<size_t>(facet.orbit)];
                    if (!tau.faithful) continue;
                    const FaceRec& tau_rep = faces.at(tau.rep_key);
                    // transported orientation basis of the facet, then the
                    // inward vector, expressed in the cell's own basis
                    RatMat M(ob.sb.b, ob.sb.b);
                    for (int j = 0; j + 1 < ob.sb.b; ++j) {
                        IntVec hv = apply(facet.transporter,
                                          tau_rep.gens[tau.sb.gen_idx[static_cast<size_t>(j)]]);
                        auto c = coords_in(ob.sb, vec_rank_one_coords(hv));
                        for (int i = 0; i < ob.sb.b; ++i) M.at(i, j) = c[static_cast<size_t>(i)];
                    }
                    for (int i = 0; i < ob.sb.b; ++i) M.at(i, ob.sb.b - 1) = u_coords[static_cast<size_t>(i)];
                    Rat dm = det(M);
                    if (dm == 0) throw std::logic_error("build_complex: degenerate incidence frame");
                    int sign = dm > 0 ? 1 : -1;
                    bd.at(tau.sigma_index, ob.sigma_index) += sign;
                }
            }
        }
        cc.boundary[k] = std::move(bd);
    }

    cc.validate();
    if (!cc.boundary_squares_to_zero())
        throw std::logic_error("build_complex: boundary composition is nonzero");
    return cc;
}

} // namespace perfhom
