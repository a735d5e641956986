#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "perfhom/voronoi.hpp"
#include "perfhom/torsion.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace perfhom;

namespace {

SymForm a2() {
    return SymForm::from_rows({{Rat(2), Rat(1)}, {Rat(1), Rat(2)}});
}

IntMat random_unimodular(int n, std::mt19937& rng, int factors = 6) {
    std::uniform_int_distribution<int> idx(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    IntMat g = IntMat::identity(n);
    for (int s = 0; s < factors; ++s) {
        int i = idx(rng), j = idx(rng);
        if (i == j) continue;
        IntMat e = IntMat::identity(n);
        e.at(i, j) = coef(rng);
        g = mul(g, e);
    }
    return g;
}

std::vector<IntVec> mapped_pairs(const IntMat& h, const std::vector<IntVec>& s) {
    std::vector<IntVec> out;
    for (const auto& v : s) {
        IntVec w = perfhom::apply(h, v);
        canonical_sign(w);
        out.push_back(w);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Shared expensive complexes.
const ChainComplexZ& sl4() {
    static ChainComplexZ cc = build_complex(4, GroupMode::SL);
    return cc;
}

} // namespace

TEST_CASE("initial form: two on the diagonal, one off, perfect with minimum 2") {
    for (int n = 2; n <= 5; ++n) {
        SymForm a = initial_form(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                CHECK(a.at(i, j) == (i == j ? Rat(2) : Rat(1)));
        CHECK(a.determinant() == Rat(n + 1));
        MinVecSet mv = shortest_vectors(a);
        CHECK(mv.mu == Rat(2));
        CHECK(mv.pair_count() == n * (n + 1) / 2);
        if (n <= 4) CHECK(is_perfect(a));
    }
}

TEST_CASE("facets of the hexagonal cone") {
    PerfectFormRecord rec = make_record(a2(), 0);
    CHECK(rec.det == Rat(3));
    CHECK(rec.aut_order == 12);
    REQUIRE(rec.minvecs.pair_count() == 3);
    // canonical representatives, lexicographically sorted
    CHECK(rec.minvecs.vectors[0] == IntVec{0, 1});
    CHECK(rec.minvecs.vectors[1] == IntVec{1, -1});
    CHECK(rec.minvecs.vectors[2] == IntVec{1, 0});

    std::vector<Facet> fs = facets(rec);
    REQUIRE(fs.size() == 3);
    std::set<std::vector<std::size_t>> supports;
    for (const auto& f : fs) {
        CHECK(f.support.size() == 2);
        supports.insert(f.support);
        // functional vanishes exactly on the support
        std::set<std::size_t> on(f.support.begin(), f.support.end());
        for (std::size_t i = 0; i < rec.minvecs.vectors.size(); ++i) {
            Rat val = f.functional.evaluate(rec.minvecs.vectors[i]);
            if (on.count(i))
                CHECK(val == 0);
            else
                CHECK(val > 0);
        }
    }
    CHECK(supports == std::set<std::vector<std::size_t>>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("neighbor across a facet of the hexagonal form") {
    PerfectFormRecord rec = make_record(a2(), 0);
    std::vector<Facet> fs = facets(rec);

    // Across the facet supported on {e2, e1} the walk lands on the reflected copy.
    for (const auto& f : fs) {
        if (f.support != std::vector<std::size_t>{0, 2}) continue;
        SymForm nb = neighbor(rec, f);
        CHECK(nb == SymForm::from_rows({{Rat(2), Rat(-1)}, {Rat(-1), Rat(2)}}));
    }

    // Every neighbor of the single class in rank 2 is again that class.
    for (const auto& f : fs) {
        SymForm nb = neighbor(rec, f);
        CHECK(is_perfect(nb));
        CHECK(nb != rec.form);
        auto g = is_equivalent(nb, rec.form);
        REQUIRE(g.has_value());
        CHECK(nb.act(*g) == rec.form);
    }
}

TEST_CASE("neighbor relation is symmetric") {
    PerfectFormRecord rec = make_record(initial_form(3), 0);
    std::vector<Facet> fs = facets(rec);
    REQUIRE(!fs.empty());
    SymForm nb = neighbor(rec, fs[0]);
    PerfectFormRecord nrec = make_record(nb, 1);
    // one of nb's neighbors is the original form
    bool back = false;
    for (const auto& f : facets(nrec)) {
        SymForm b = neighbor(nrec, f);
        if (b == rec.form) back = true;
    }
    CHECK(back);
}

TEST_CASE("equivalence detects a change of basis and rejects distinct classes") {
    std::mt19937 rng(2026);
    for (int n = 2; n <= 4; ++n) {
        SymForm a = initial_form(n);
        for (int t = 0; t < 8; ++t) {
            IntMat g = random_unimodular(n, rng);
            SymForm b = a.act(g);
            auto h = is_equivalent(a, b);
            REQUIRE(h.has_value());
            CHECK(is_unimodular(*h));
            CHECK(a.act(*h) == b);
        }
    }

    auto recs = enumerate_perfect(4);
    REQUIRE(recs.size() == 2);
    CHECK(!is_equivalent(recs[0].form, recs[1].form).has_value());
    // different determinant, same dimension
    CHECK(!is_equivalent(a2(), SymForm::identity(2)).has_value());
}

TEST_CASE("automorphism group sizes of the classical forms") {
    CHECK(form_automorphisms(a2()).size() == 12);
    CHECK(form_automorphisms(initial_form(3)).size() == 48);
    CHECK(form_automorphisms(initial_form(4)).size() == 240);
    auto recs = enumerate_perfect(4);
    REQUIRE(recs.size() == 2);
    // the other rank-4 class is the 12-pair one
    for (const auto& r : recs)
        if (r.minvecs.pair_count() == 12) CHECK(r.aut_order == 1152);

    // every automorphism actually fixes the form
    SymForm a = initial_form(3);
    for (const auto& g : form_automorphisms(a)) {
        CHECK(is_unimodular(g));
        CHECK(a.act(g) == a);
    }
}

TEST_CASE("classification by the neighbor walk in ranks 2, 3, 4") {
    auto r2 = enumerate_perfect(2);
    REQUIRE(r2.size() == 1);
    CHECK(r2[0].minvecs.pair_count() == 3);
    CHECK(r2[0].det == Rat(3));
    CHECK(r2[0].aut_order == 12);

    auto r3 = enumerate_perfect(3);
    REQUIRE(r3.size() == 1);
    CHECK(r3[0].minvecs.pair_count() == 6);
    CHECK(r3[0].det == Rat(4));
    CHECK(r3[0].aut_order == 48);

    auto r4 = enumerate_perfect(4);
    REQUIRE(r4.size() == 2);
    std::multiset<int> pcs, dets;
    std::multiset<long> auts;
    for (const auto& r : r4) {
        CHECK(is_perfect(r.form));
        CHECK(r.form == r.form.primitive());
        pcs.insert(r.minvecs.pair_count());
        dets.insert(static_cast<int>(r.det.get_num().get_si()));
        auts.insert(r.aut_order.get_si());
    }
    CHECK(pcs == std::multiset<int>{10, 12});
    CHECK(dets == std::multiset<int>{4, 5});
    CHECK(auts == std::multiset<long>{240, 1152});
    CHECK(is_equivalent(r4[0].form, initial_form(4)).has_value());

    // records are indexed in discovery order
    for (std::size_t i = 0; i < r4.size(); ++i) CHECK(r4[i].index == static_cast<int>(i));
}

TEST_CASE("cone facets of a cell") {
    MinVecSet mv = shortest_vectors(a2());
    auto top = cell_facets(mv.vectors);
    REQUIRE(top.size() == 3);
    for (const auto& s : top) CHECK(s.size() == 2);

    std::vector<IntVec> edge = {IntVec{0, 1}, IntVec{1, 0}};
    auto ef = cell_facets(edge);
    REQUIRE(ef.size() == 2);
    CHECK(ef[0] == std::vector<std::size_t>{0});
    CHECK(ef[1] == std::vector<std::size_t>{1});
}

TEST_CASE("cell stabilizers in the two group modes") {
    MinVecSet mv = shortest_vectors(a2());

    Cell top_sl = make_cell(mv.vectors, GroupMode::SL);
    CHECK(top_sl.dim == 2);
    CHECK(!top_sl.in_boundary);
    CHECK(top_sl.stabilizer_order == 6);
    CHECK(top_sl.orientation_faithful);

    Cell top_gl = make_cell(mv.vectors, GroupMode::GL);
    CHECK(top_gl.stabilizer_order == 12);
    CHECK(!top_gl.orientation_faithful);

    std::vector<IntVec> edge = {IntVec{0, 1}, IntVec{1, 0}};
    Cell e_sl = make_cell(edge, GroupMode::SL);
    CHECK(e_sl.dim == 1);
    CHECK(!e_sl.in_boundary);
    CHECK(e_sl.stabilizer_order == 4);
    CHECK(!e_sl.orientation_faithful);
    Cell e_gl = make_cell(edge, GroupMode::GL);
    CHECK(e_gl.stabilizer_order == 8);

    std::vector<IntVec> vertex = {IntVec{1, 0}};
    Cell v = make_cell(vertex, GroupMode::GL);
    CHECK(v.in_boundary);
    CHECK(v.dim == 0);

    // the raw element list covers both determinant signs
    auto elems = cell_stabilizer_elements(edge);
    CHECK(elems.size() == 8);
    for (const auto& h : elems) {
        CHECK(is_unimodular(h));
        CHECK(mapped_pairs(h, edge) == edge);
    }
}

TEST_CASE("cell equivalence respects the group mode and conjugation") {
    std::vector<IntVec> e01 = {IntVec{0, 1}, IntVec{1, -1}};
    std::vector<IntVec> e02 = {IntVec{0, 1}, IntVec{1, 0}};
    auto h = cell_equivalence(e01, e02, GroupMode::SL);
    REQUIRE(h.has_value());
    CHECK(det(*h) == 1);
    CHECK(mapped_pairs(*h, e01) == e02);

    std::mt19937 rng(7);
    MinVecSet mv = shortest_vectors(initial_form(3));
    for (int t = 0; t < 5; ++t) {
        IntMat g = random_unimodular(3, rng);
        std::vector<IntVec> image = mapped_pairs(g, mv.vectors);
        auto w = cell_equivalence(mv.vectors, image, GroupMode::GL);
        REQUIRE(w.has_value());
        CHECK(mapped_pairs(*w, mv.vectors) == image);
        // stabilizer order is a conjugation invariant
        auto s1 = stabilizer(make_cell(mv.vectors, GroupMode::GL), GroupMode::GL);
        auto s2 = stabilizer(make_cell(image, GroupMode::GL), GroupMode::GL);
        CHECK(s1.first == s2.first);
        CHECK(s1.second == s2.second);
    }

    // cells of different sizes can never match
    CHECK(!cell_equivalence(e01, mv.vectors, GroupMode::GL).has_value());
}

TEST_CASE("quotient complex in rank 2") {
    ChainComplexZ sl = build_complex(2, GroupMode::SL);
    CHECK(sl.n == 2);
    CHECK(sl.group == "sl");
    REQUIRE(sl.cell_counts == std::map<int, int>{{2, 1}});
    CHECK(sl.labels.at(2) == std::vector<std::string>{"d2_0"});
    IntMat d2 = sl.boundary_or_zero(2);
    CHECK(d2.rows == 0);
    CHECK(d2.cols == 1);
    CHECK(sl.boundary_squares_to_zero());
    Homology h2 = homology(sl, 2);
    CHECK(h2.betti == 1);
    CHECK(h2.torsion.empty());

    ChainComplexZ gl = build_complex(2, GroupMode::GL);
    CHECK(gl.cell_counts.empty());
}

TEST_CASE("quotient complex in rank 3") {
    for (GroupMode mode : {GroupMode::SL, GroupMode::GL}) {
        ChainComplexZ cc = build_complex(3, mode);
        REQUIRE(cc.cell_counts == std::map<int, int>{{5, 1}});
        CHECK(cc.boundary_squares_to_zero());
        Homology h5 = homology(cc, 5);
        CHECK(h5.betti == 1);
        CHECK(h5.torsion.empty());
    }
}

TEST_CASE("quotient complex in rank 4, special linear mode") {
    const ChainComplexZ& cc = sl4();
    REQUIRE(cc.cell_counts ==
            std::map<int, int>{{4, 1}, {5, 1}, {6, 1}, {7, 0}, {8, 1}, {9, 2}});
    CHECK(cc.boundary_squares_to_zero());

    IntMat d5 = cc.boundary_or_zero(5);
    REQUIRE((d5.rows == 1 && d5.cols == 1));
    CHECK((d5.at(0, 0) == 1 || d5.at(0, 0) == -1));

    IntMat d9 = cc.boundary_or_zero(9);
    REQUIRE((d9.rows == 1 && d9.cols == 2));
    std::multiset<Int> entries{abs(d9.at(0, 0)), abs(d9.at(0, 1))};
    CHECK(entries == std::multiset<Int>{Int(10), Int(48)});

    // all other boundary maps vanish
    for (int k = cc.min_degree(); k <= cc.max_degree(); ++k) {
        if (k == 5 || k == 9) continue;
        IntMat d = cc.boundary_or_zero(k);
        for (int i = 0; i < d.rows; ++i)
            for (int j = 0; j < d.cols; ++j) CHECK(d.at(i, j) == 0);
    }
}

TEST_CASE("rank-4 homology over the special linear group") {
    const ChainComplexZ& cc = sl4();
    struct Row { int k; long betti; std::vector<long> torsion; };
    const Row expected[] = {
        {4, 0, {}}, {5, 0, {}}, {6, 1, {}}, {7, 0, {}}, {8, 0, {2}}, {9, 1, {}},
    };
    for (const auto& e : expected) {
        Homology h = homology(cc, e.k);
        CHECK(h.betti == e.betti);
        REQUIRE(h.torsion.size() == e.torsion.size());
        for (std::size_t i = 0; i < e.torsion.size(); ++i)
            CHECK(h.torsion[i] == e.torsion[i]);
    }
}

TEST_CASE("quotient complex in rank 4, general linear mode") {
    ChainComplexZ cc = build_complex(4, GroupMode::GL);
    REQUIRE(cc.cell_counts == std::map<int, int>{{6, 1}});
    Homology h6 = homology(cc, 6);
    CHECK(h6.betti == 1);
    CHECK(h6.torsion.empty());
}
