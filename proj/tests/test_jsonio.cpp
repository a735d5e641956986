#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "perfhom/jsonio.hpp"
#include "perfhom/torsion.hpp"

#include <cstdio>
#include <fstream>

using namespace perfhom;

namespace {

SymForm a2() {
    return SymForm::from_rows({{Rat(2), Rat(1)}, {Rat(1), Rat(2)}});
}

ChainComplexZ sample_complex() {
    ChainComplexZ cc;
    cc.n = 4;
    cc.group = "sl";
    cc.cell_counts = {{4, 1}, {5, 1}, {6, 2}};
    IntMat d5(1, 1);
    d5.at(0, 0) = -1;
    IntMat d6(1, 2);
    d6.at(0, 0) = 48;
    d6.at(0, 1) = -10;
    cc.boundary = {{5, d5}, {6, d6}};
    cc.labels = {{4, {"d4_0"}}, {5, {"d5_0"}}, {6, {"d6_0", "d6_1"}}};
    cc.validate();
    return cc;
}

std::string temp_file(const std::string& contents, const char* name) {
    std::string path = std::string("/tmp/perfhom_test_") + name;
    std::ofstream out(path, std::ios::trunc);
    out << contents;
    return path;
}

bool same_matrices(const ChainComplexZ& a, const ChainComplexZ& b) {
    if (a.cell_counts != b.cell_counts) return false;
    for (int k = a.min_degree(); k <= a.max_degree() + 1; ++k)
        if (!(a.boundary_or_zero(k) == b.boundary_or_zero(k))) return false;
    return true;
}

} // namespace

TEST_CASE("rational serialization") {
    CHECK(rat_to_json(Rat(5)).is_number_integer());
    CHECK(rat_to_json(Rat(5)).get<long>() == 5);
    CHECK(rat_to_json(Rat(3, 2)).get<std::string>() == "3/2");
    CHECK(rat_to_json(Rat(-7, 3)).get<std::string>() == "-7/3");

    for (const Rat& r : {Rat(0), Rat(42), Rat(-9), Rat(3, 2), Rat(-22, 7)})
        CHECK(rat_from_json(rat_to_json(r)) == r);

    // big values leave the native-integer range and come back intact
    Rat big(Int("123456789012345678901234567890123456789"), Int(7));
    json j = rat_to_json(big);
    CHECK(j.is_string());
    CHECK(rat_from_json(j) == big);

    CHECK(rat_from_json(json(13)) == Rat(13));
    CHECK_THROWS_AS(rat_from_json(json::array()), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_json(json("x/y")), std::invalid_argument);
}

TEST_CASE("form serialization") {
    SymForm a = a2();
    json j = form_to_json(a);
    CHECK(j.at("n") == 2);
    CHECK(form_from_json(j) == a);

    SymForm halfs = SymForm::from_rows({{Rat(1), Rat(1, 2)}, {Rat(1, 2), Rat(1)}});
    CHECK(form_from_json(form_to_json(halfs)) == halfs);

    json bad = j;
    bad["rows"] = json::array({json::array({2, 1})});
    CHECK_THROWS_AS(form_from_json(bad), std::invalid_argument);
    CHECK_THROWS_AS(form_from_json(json::object()), std::invalid_argument);
}

TEST_CASE("minimal-vector and record serialization") {
    PerfectFormRecord rec = make_record(a2(), 0);
    json mv = minvecs_to_json(rec.minvecs);
    CHECK(mv.at("mu") == 2);
    CHECK(mv.at("pair_count") == 3);
    REQUIRE(mv.at("pairs").size() == 3);
    CHECK(mv.at("pairs")[0] == json::array({0, 1}));

    json r = record_to_json(rec);
    for (const char* key : {"index", "form", "det", "mu", "pair_count", "aut_order", "minimal_vectors"})
        CHECK(r.contains(key));
    CHECK(r.at("det") == 3);
    CHECK(r.at("aut_order") == 12);
    CHECK(form_from_json(r.at("form")) == rec.form);
}

TEST_CASE("chain complex JSON round trip") {
    ChainComplexZ cc = sample_complex();
    json j = complex_to_json(cc);
    CHECK(j.at("n") == 4);
    CHECK(j.at("group") == "sl");
    CHECK(j.at("provenance") == "exact");

    ChainComplexZ back = complex_from_json(j);
    CHECK(back.n == cc.n);
    CHECK(back.group == cc.group);
    CHECK(back.labels == cc.labels);
    CHECK(same_matrices(cc, back));

    // entries are 1-based (i, j, value) triples
    json bad = j;
    bad["boundaries"][0]["entries"][0][0] = 0;
    CHECK_THROWS_AS(complex_from_json(bad), std::invalid_argument);
}

TEST_CASE("chain complex text round trip") {
    ChainComplexZ cc = sample_complex();
    std::string text = complex_to_text(cc);
    ChainComplexZ back = complex_from_text(text);
    CHECK(same_matrices(cc, back));

    // the special-linear rank-2 complex survives its degenerate shape
    ChainComplexZ sl2;
    sl2.cell_counts = {{2, 1}};
    std::string t2 = complex_to_text(sl2);
    ChainComplexZ b2 = complex_from_text(t2);
    CHECK(b2.count(2) == 1);
    CHECK(b2.count(1) == 0);

    CHECK_THROWS_AS(complex_from_text("1 2 2 1\n0 1 5\n"), std::invalid_argument);
    CHECK_THROWS_AS(complex_from_text("1 2 2 2\n1 1 5\n"), std::invalid_argument);
    CHECK_THROWS_AS(complex_from_text("1 2 2 -1\n"), std::invalid_argument);
    // stanzas must chain: cols of degree k-1 are rows of degree k
    CHECK_THROWS_AS(complex_from_text("1 1 1 0\n2 3 1 0\n"), std::invalid_argument);
}

TEST_CASE("loading sniffs the serialization") {
    ChainComplexZ cc = sample_complex();
    std::string jpath = temp_file(complex_to_json(cc).dump(2), "complex.json");
    std::string tpath = temp_file(complex_to_text(cc), "complex.txt");

    ChainComplexZ fromj = load_complex(jpath);
    ChainComplexZ fromt = load_complex(tpath);
    CHECK(same_matrices(cc, fromj));
    CHECK(same_matrices(cc, fromt));
    CHECK(fromj.group == "sl");

    CHECK_THROWS_AS(load_complex("/tmp/perfhom_test_does_not_exist"), std::invalid_argument);
    std::remove(jpath.c_str());
    std::remove(tpath.c_str());

    // homology computed from a reloaded complex matches the original
    Homology h4 = homology(cc, 4);
    Homology h4b = homology(fromt, 4);
    CHECK(h4.betti == h4b.betti);
    REQUIRE(h4.torsion.size() == h4b.torsion.size());
}
