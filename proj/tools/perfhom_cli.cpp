#include "perfhom/bounds.hpp"
#include "perfhom/cyclotomic.hpp"
#include "perfhom/jsonio.hpp"
#include "perfhom/torsion.hpp"
#include "perfhom/voronoi.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using perfhom::json;

struct Options {
    std::string out;
    std::string format = "json";
    int threads = 1;
    long digits = 30;
    std::uint64_t seed = 0; // reserved for randomized subroutines; current ops are deterministic
    std::string cache_dir = ".perfhom-cache";
    bool no_cache = false;
    bool check = false;
};

void common_checks(const Options& o) {
    if (o.digits < 20) throw std::invalid_argument("digits must be at least 20");
    if (o.threads < 1) throw std::invalid_argument("threads must be positive");
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::optional<std::string> cache_get(const Options& o, const std::string& key) {
    if (o.no_cache) return std::nullopt;
    std::filesystem::path p = std::filesystem::path(o.cache_dir) / (fnv1a_hex(key) + ".json");
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    try {
        json j = json::parse(in);
        if (j.is_object() && j.value("key", std::string()) == key && j.contains("output") &&
            j["output"].is_string())
            return j["output"].get<std::string>();
    } catch (const json::exception&) {
        // corrupt entry: fall through and recompute
    }
    return std::nullopt;
}

void cache_put(const Options& o, const std::string& key, const std::string& output) {
    if (o.no_cache) return;
    std::error_code ec;
    std::filesystem::create_directories(o.cache_dir, ec);
    if (ec) return; // caching is best effort
    std::filesystem::path p = std::filesystem::path(o.cache_dir) / (fnv1a_hex(key) + ".json");
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) return;
    out << json{{"key", key}, {"output", output}}.dump(2) << "\n";
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    if (!f) throw std::invalid_argument("cannot open output file: " + o.out);
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

perfhom::IntMat read_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
    long rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows < 0 || cols < 0)
        throw std::invalid_argument("matrix file must start with: rows cols");
    perfhom::IntMat m(static_cast<int>(rows), static_cast<int>(cols));
    std::string tok;
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) {
            if (!(in >> tok)) throw std::invalid_argument("matrix file truncated");
            m.at(r, c) = perfhom::Int(tok);
        }
    return m;
}

json bigbound_json(const perfhom::BigBound& b) {
    json j{{"base", b.base.get_str()},
           {"multiplier", b.multiplier.get_str()},
           {"zero", b.zero},
           {"ln", b.ln_str},
           {"log10", b.log10_str},
           {"lnln", b.lnln_str},
           {"digits", b.digits},
           {"provenance", "certified-precision"}};
    if (b.exact) j["exact"] = b.exact->get_str();
    return j;
}

std::string bigbound_text(const perfhom::BigBound& b) {
    std::ostringstream os;
    os << "base " << b.base.get_str() << "\nmultiplier " << b.multiplier.get_str() << "\n";
    if (b.exact) os << "exact " << b.exact->get_str() << "\n";
    os << "ln " << b.ln_str << "\nlog10 " << b.log10_str << "\nlnln " << b.lnln_str << "\ndigits "
       << b.digits << "\n";
    return os.str();
}

json growth_json(const char* pname, long pval, const perfhom::GrowthCheck& g) {
    bool ok = g.ok_poly && g.ok_power && g.ok_epsilon;
    return json{{pname, pval},
                {"lhs_lnln", g.lhs},
                {"rhs_polynomial", g.rhs_poly},
                {"rhs_power", g.rhs_power},
                {"ok_polynomial", g.ok_poly},
                {"ok_power", g.ok_power},
                {"ok_epsilon", g.ok_epsilon},
                {"ok", ok},
                {"digits", g.digits},
                {"provenance", "certified-precision"}};
}

std::string growth_text(const char* pname, long pval, const perfhom::GrowthCheck& g) {
    std::ostringstream os;
    os << pname << ' ' << pval << "\nlhs_lnln " << g.lhs << "\nrhs_polynomial " << g.rhs_poly
       << "\nrhs_power " << g.rhs_power << "\nok_polynomial " << (g.ok_poly ? 1 : 0) << "\nok_power "
       << (g.ok_power ? 1 : 0) << "\nok_epsilon " << (g.ok_epsilon ? 1 : 0) << "\nok "
       << (g.ok_poly && g.ok_power && g.ok_epsilon ? 1 : 0) << "\ndigits " << g.digits << "\n";
    return os.str();
}

json scalar_json(std::initializer_list<std::pair<std::string, json>> fields) {
    json j;
    for (const auto& [k, v] : fields) j[k] = v;
    j["provenance"] = "exact";
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Voronoi cell complexes, torsion bounds and cyclotomic number-theory checks"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--out", opt.out, "write output to a file instead of stdout");
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    app.add_option("--threads", opt.threads, "worker threads for enumeration")->capture_default_str();
    app.add_option("--digits", opt.digits, "certified significant digits (minimum 20)")
        ->capture_default_str();
    app.add_option("--seed", opt.seed, "seed reserved for randomized subroutines");
    app.add_option("--cache-dir", opt.cache_dir, "cache directory for expensive enumerations")
        ->capture_default_str();
    app.add_flag("--no-cache", opt.no_cache, "disable the result cache");
    app.add_flag("--check", opt.check, "run extra self-verification on the result");

    // ---------------- voronoi ----------------
    auto* voronoi = app.add_subcommand("voronoi", "perfect-form enumeration and cell complexes");
    voronoi->require_subcommand(1);
    voronoi->fallthrough();

    {
        auto n = std::make_shared<int>(4);
        auto allow6 = std::make_shared<bool>(false);
        auto* c = voronoi->add_subcommand("enumerate", "arithmetic classes of perfect forms");
        c->fallthrough();
        c->add_option("--n", *n, "dimension (2..5, or 6 with --allow-n6)")->capture_default_str();
        c->add_flag("--allow-n6", *allow6, "permit the long dimension-6 run");
        c->callback([&opt, n, allow6] {
            common_checks(opt);
            std::ostringstream ks;
            ks << "voronoi enumerate|n=" << *n << "|allow6=" << (*allow6 ? 1 : 0) << "|format="
               << opt.format;
            if (auto hit = cache_get(opt, ks.str())) {
                emit(opt, *hit);
                return;
            }
            auto recs = perfhom::enumerate_perfect(*n, opt.threads, *allow6);
            if (opt.check) {
                for (const auto& r : recs)
                    if (!perfhom::is_perfect(r.form))
                        throw std::logic_error("check failed: class is not perfect");
                for (size_t i = 0; i < recs.size(); ++i)
                    for (size_t j = i + 1; j < recs.size(); ++j)
                        if (perfhom::is_equivalent(recs[i].form, recs[j].form))
                            throw std::logic_error("check failed: equivalent classes listed twice");
            }
            std::string outp;
            if (opt.format == "json") {
                json classes = json::array();
                for (const auto& r : recs) classes.push_back(perfhom::record_to_json(r));
                outp = dump(json{{"n", *n},
                                 {"class_count", recs.size()},
                                 {"classes", std::move(classes)},
                                 {"provenance", "exact"}});
            } else {
                std::ostringstream os;
                os << "n " << *n << "\nclasses " << recs.size() << "\n";
                for (const auto& r : recs) {
                    os << "class " << r.index << " det " << perfhom::rat_to_string(r.det) << " mu "
                       << perfhom::rat_to_string(r.minvecs.mu) << " pairs " << r.minvecs.pair_count()
                       << " aut " << r.aut_order.get_str() << " form";
                    for (int i = 0; i < r.form.dim(); ++i)
                        for (int j = 0; j < r.form.dim(); ++j)
                            os << ' ' << perfhom::rat_to_string(r.form.at(i, j));
                    os << "\n";
                }
                outp = os.str();
            }
            cache_put(opt, ks.str(), outp);
            emit(opt, outp);
        });
    }

    {
        auto n = std::make_shared<int>(0);
        auto group = std::make_shared<std::string>("sl");
        auto* c = voronoi->add_subcommand("complex", "quotient cell complex with signed boundaries");
        c->fallthrough();
        c->add_option("--n", *n, "dimension (2..4)")->required();
        c->add_option("--group", *group, "arithmetic group")
            ->check(CLI::IsMember({"sl", "gl"}))
            ->capture_default_str();
        c->callback([&opt, n, group] {
            common_checks(opt);
            std::ostringstream ks;
            ks << "voronoi complex|n=" << *n << "|group=" << *group << "|format=" << opt.format;
            if (auto hit = cache_get(opt, ks.str())) {
                emit(opt, *hit);
                return;
            }
            auto mode = (*group == "sl") ? perfhom::GroupMode::SL : perfhom::GroupMode::GL;
            auto cc = perfhom::build_complex(*n, mode, opt.threads);
            if (opt.check) {
                cc.validate();
                if (!cc.boundary_squares_to_zero())
                    throw std::logic_error("check failed: boundary composition is nonzero");
            }
            std::string outp = (opt.format == "json") ? dump(perfhom::complex_to_json(cc))
                                                      : perfhom::complex_to_text(cc);
            cache_put(opt, ks.str(), outp);
            emit(opt, outp);
        });
    }

    // ---------------- torsion ----------------
    auto* torsion = app.add_subcommand("torsion", "Smith forms, torsion bounds and homology");
    torsion->require_subcommand(1);
    torsion->fallthrough();

    {
        auto file = std::make_shared<std::string>();
        auto* c = torsion->add_subcommand("snf", "Smith normal form of an integer matrix");
        c->fallthrough();
        c->add_option("file", *file, "matrix file: rows cols, then row-major entries")->required();
        c->callback([&opt, file] {
            common_checks(opt);
            perfhom::IntMat m = read_matrix(*file);
            auto s = perfhom::smith_normal_form(m);
            if (opt.check)
                for (size_t i = 1; i < s.invariant_factors.size(); ++i)
                    if (s.invariant_factors[i] % s.invariant_factors[i - 1] != 0)
                        throw std::logic_error("check failed: invariant factors do not divide in turn");
            if (opt.format == "json") {
                json f = json::array();
                for (const auto& d : s.invariant_factors) f.push_back(d.get_str());
                emit(opt, dump(scalar_json({{"rows", m.rows},
                                            {"cols", m.cols},
                                            {"rank", s.rank()},
                                            {"invariant_factors", std::move(f)},
                                            {"torsion_card", perfhom::torsion_card(s).get_str()}})));
            } else {
                std::ostringstream os;
                os << "rank " << s.rank() << "\ninvariants";
                for (const auto& d : s.invariant_factors) os << ' ' << d.get_str();
                os << "\n";
                emit(opt, os.str());
            }
        });
    }

    {
        auto file = std::make_shared<std::string>();
        auto kk = std::make_shared<int>(0);
        auto* c = torsion->add_subcommand("bound", "a-priori torsion bound for one homology degree");
        c->fallthrough();
        c->add_option("--complex", *file, "chain complex file (json or text)")->required();
        c->add_option("--k", *kk, "homology degree")->required();
        c->callback([&opt, file, kk] {
            common_checks(opt);
            auto cc = perfhom::load_complex(*file);
            auto b = perfhom::prop3_bound(cc, *kk);
            if (opt.format == "json") {
                emit(opt, dump(scalar_json({{"k", *kk},
                                            {"a", b.a.get_str()},
                                            {"b", b.b.get_str()},
                                            {"b_squared", b.b_squared.get_str()},
                                            {"bound", b.bound.get_str()}})));
            } else {
                std::ostringstream os;
                os << "a " << b.a.get_str() << "\nb " << b.b.get_str() << "\nbound "
                   << b.bound.get_str() << "\n";
                emit(opt, os.str());
            }
        });
    }

    {
        auto file = std::make_shared<std::string>();
        auto kk = std::make_shared<int>(0);
        auto* c = torsion->add_subcommand("homology", "integral homology of one degree");
        c->fallthrough();
        c->add_option("--complex", *file, "chain complex file (json or text)")->required();
        c->add_option("--k", *kk, "homology degree")->required();
        c->callback([&opt, file, kk] {
            common_checks(opt);
            auto cc = perfhom::load_complex(*file);
            auto h = perfhom::homology(cc, *kk);
            if (opt.format == "json") {
                json t = json::array();
                for (const auto& d : h.torsion) t.push_back(d.get_str());
                emit(opt, dump(scalar_json(
                                   {{"k", *kk}, {"betti", h.betti.get_str()}, {"torsion", std::move(t)}})));
            } else {
                std::ostringstream os;
                os << "betti " << h.betti.get_str() << "\ntorsion";
                for (const auto& d : h.torsion) os << ' ' << d.get_str();
                os << "\n";
                emit(opt, os.str());
            }
        });
    }

    // ---------------- bounds ----------------
    auto* bounds = app.add_subcommand("bounds", "explicit constants and growth checks");
    bounds->require_subcommand(1);
    bounds->fallthrough();

    auto scalar_leaf = [&](const char* name, const char* desc, auto compute) {
        auto n = std::make_shared<int>(0);
        auto* c = bounds->add_subcommand(name, desc);
        c->fallthrough();
        c->add_option("--n", *n, "dimension")->required();
        c->callback([&opt, n, compute, name] {
            common_checks(opt);
            std::string val = compute(*n);
            if (opt.format == "json")
                emit(opt, dump(scalar_json({{"name", name}, {"n", *n}, {"value", val}})));
            else
                emit(opt, std::string(name) + " " + val + "\n");
        });
    };
    scalar_leaf("gamma", "Hermite constant bound 1 + n/4",
                [](int n) { return perfhom::rat_to_string(perfhom::gamma_bound(n)); });
    scalar_leaf("s", "minimal-vector pair bound 2^n - 1",
                [](int n) { return perfhom::s_bound(n).get_str(); });
    scalar_leaf("b", "box constant (2A+1)^n / 2",
                [](int n) { return perfhom::rat_to_string(perfhom::b_const(n)); });

    {
        auto n = std::make_shared<int>(0);
        auto exact = std::make_shared<bool>(false);
        auto* c = bounds->add_subcommand("a", "coefficient bound for minimal-vector coordinates");
        c->fallthrough();
        c->add_option("--n", *n, "dimension")->required();
        c->add_flag("--exact-hermite", *exact, "use the known Hermite constants (n <= 8)");
        c->callback([&opt, n, exact] {
            common_checks(opt);
            std::string val = perfhom::a_const(*n, *exact).get_str();
            if (opt.format == "json")
                emit(opt, dump(scalar_json({{"name", "a"},
                                            {"n", *n},
                                            {"exact_hermite", *exact},
                                            {"value", val}})));
            else
                emit(opt, "a " + val + "\n");
        });
    }

    {
        auto n = std::make_shared<int>(0);
        auto kk = std::make_shared<long>(0);
        auto rounded = std::make_shared<bool>(false);
        auto* c = bounds->add_subcommand("c", "orbit-count bound per dimension");
        c->fallthrough();
        c->add_option("--k", *kk, "cell dimension")->required();
        c->add_option("--n", *n, "dimension")->required();
        c->add_flag("--rounded-b", *rounded, "round the box constant up before the product");
        c->callback([&opt, n, kk, rounded] {
            common_checks(opt);
            std::string val = perfhom::c_const(*kk, *n, *rounded).get_str();
            if (opt.format == "json")
                emit(opt, dump(scalar_json({{"name", "c"},
                                            {"k", *kk},
                                            {"n", *n},
                                            {"rounded_b", *rounded},
                                            {"value", val}})));
            else
                emit(opt, "c " + val + "\n");
        });
    }

    {
        auto n = std::make_shared<int>(0);
        auto kk = std::make_shared<long>(0);
        auto* c = bounds->add_subcommand("f", "face-count bound per dimension");
        c->fallthrough();
        c->add_option("--k", *kk, "cell dimension")->required();
        c->add_option("--n", *n, "dimension")->required();
        c->callback([&opt, n, kk] {
            common_checks(opt);
            std::string val = perfhom::f_const(*kk, *n).get_str();
            if (opt.format == "json")
                emit(opt, dump(scalar_json({{"name", "f"}, {"k", *kk}, {"n", *n}, {"value", val}})));
            else
                emit(opt, "f " + val + "\n");
        });
    }

    {
        auto n = std::make_shared<int>(0);
        auto kk = std::make_shared<long>(0);
        auto* c = bounds->add_subcommand("h", "iterated torsion bound h(k, n)");
        c->fallthrough();
        c->add_option("--k", *kk, "homology degree")->required();
        c->add_option("--n", *n, "dimension")->required();
        c->callback([&opt, n, kk] {
            common_checks(opt);
            auto b = perfhom::h_const(*kk, *n, opt.digits);
            if (opt.format == "json") {
                json j = bigbound_json(b);
                j["name"] = "h";
                j["k"] = *kk;
                j["n"] = *n;
                emit(opt, dump(j));
            } else
                emit(opt, bigbound_text(b));
        });
    }

    {
        auto m = std::make_shared<long>(0);
        auto* c = bounds->add_subcommand("k", "homology torsion bound k(m)");
        c->fallthrough();
        c->add_option("--m", *m, "half-rank parameter")->required();
        c->callback([&opt, m] {
            common_checks(opt);
            auto b = perfhom::k_const(*m, opt.digits);
            if (opt.format == "json") {
                json j = bigbound_json(b);
                j["name"] = "k";
                j["m"] = *m;
                emit(opt, dump(j));
            } else
                emit(opt, bigbound_text(b));
        });
    }

    {
        auto n = std::make_shared<long>(0);
        auto* c = bounds->add_subcommand("v", "cyclotomic application bound v(n)");
        c->fallthrough();
        c->add_option("--n", *n, "parameter")->required();
        c->callback([&opt, n] {
            common_checks(opt);
            auto b = perfhom::v_const(*n, opt.digits);
            if (opt.format == "json") {
                json j = bigbound_json(b);
                j["name"] = "v";
                j["n"] = *n;
                emit(opt, dump(j));
            } else
                emit(opt, bigbound_text(b));
        });
    }

    {
        auto m = std::make_shared<long>(0);
        auto* c = bounds->add_subcommand("epsilon", "error polynomial in the growth estimates");
        c->fallthrough();
        c->add_option("--m", *m, "argument")->required();
        c->callback([&opt, m] {
            common_checks(opt);
            std::string val = perfhom::epsilon_poly_str(*m, opt.digits);
            if (opt.format == "json")
                emit(opt, dump(json{{"name", "epsilon"},
                                    {"m", *m},
                                    {"value", val},
                                    {"digits", opt.digits},
                                    {"provenance", "certified-precision"}}));
            else
                emit(opt, "epsilon " + val + "\n");
        });
    }

    {
        auto m = std::make_shared<long>(0);
        auto* c = bounds->add_subcommand("lemma2", "growth estimate for k(m)");
        c->fallthrough();
        c->add_option("--m", *m, "half-rank parameter (>= 2)")->required();
        c->callback([&opt, m] {
            common_checks(opt);
            auto g = perfhom::lemma2_check(*m, opt.digits);
            emit(opt, opt.format == "json" ? dump(growth_json("m", *m, g)) : growth_text("m", *m, g));
        });
    }

    {
        auto n = std::make_shared<long>(0);
        auto* c = bounds->add_subcommand("vandiver-bound", "growth estimate for v(n)");
        c->fallthrough();
        c->add_option("--n", *n, "parameter (>= 2)")->required();
        c->callback([&opt, n] {
            common_checks(opt);
            auto g = perfhom::vandiver_bound_check(*n, opt.digits);
            emit(opt, opt.format == "json" ? dump(growth_json("n", *n, g)) : growth_text("n", *n, g));
        });
    }

    // ---------------- cyclo ----------------
    auto* cyclo = app.add_subcommand("cyclo", "Bernoulli numbers, irregular pairs and component tests");
    cyclo->require_subcommand(1);
    cyclo->fallthrough();

    {
        auto n = std::make_shared<long>(0);
        auto* c = cyclo->add_subcommand("bernoulli", "exact Bernoulli number B_n");
        c->fallthrough();
        c->add_option("--n", *n, "index")->required();
        c->callback([&opt, n] {
            common_checks(opt);
            std::string val = perfhom::rat_to_string(perfhom::bernoulli_exact(*n));
            if (opt.format == "json")
                emit(opt, dump(scalar_json({{"name", "bernoulli"}, {"n", *n}, {"value", val}})));
            else
                emit(opt, "B " + val + "\n");
        });
    }

    {
        auto n = std::make_shared<long>(0);
        auto* c = cyclo->add_subcommand("numerator", "|numerator(B_n / n)| for even n");
        c->fallthrough();
        c->add_option("--n", *n, "even index")->required();
        c->callback([&opt, n] {
            common_checks(opt);
            std::string val = perfhom::bernoulli_numerator(*n).get_str();
            if (opt.format == "json")
                emit(opt, dump(scalar_json({{"name", "numerator"}, {"n", *n}, {"value", val}})));
            else
                emit(opt, "N " + val + "\n");
        });
    }

    {
        auto n = std::make_shared<long>(0);
        auto p = std::make_shared<std::uint64_t>(0);
        auto* c = cyclo->add_subcommand("modp", "B_n mod p for 0 <= n <= p - 3");
        c->fallthrough();
        c->add_option("--n", *n, "index")->required();
        c->add_option("--p", *p, "odd prime")->required();
        c->callback([&opt, n, p] {
            common_checks(opt);
            std::uint64_t val = perfhom::bernoulli_mod_p(*n, *p);
            if (opt.format == "json")
                emit(opt, dump(scalar_json({{"name", "modp"}, {"n", *n}, {"p", *p}, {"value", val}})));
            else
                emit(opt, std::to_string(val) + "\n");
        });
    }

    {
        auto maxp = std::make_shared<std::uint64_t>(0);
        auto* c = cyclo->add_subcommand("irregular", "irregular pairs (p, k) for primes up to a bound");
        c->fallthrough();
        c->add_option("--max-p", *maxp, "scan primes p <= max-p")->required();
        c->callback([&opt, maxp] {
            common_checks(opt);
            auto pairs = perfhom::irregular_pairs_upto(*maxp);
            if (opt.format == "json") {
                json arr = json::array();
                for (const auto& pr : pairs) arr.push_back(json{{"p", pr.p}, {"k", pr.k}});
                emit(opt, dump(scalar_json({{"max_p", *maxp},
                                            {"count", pairs.size()},
                                            {"pairs", std::move(arr)}})));
            } else {
                std::ostringstream os;
                for (const auto& pr : pairs) os << pr.p << ' ' << pr.k << "\n";
                emit(opt, os.str());
            }
        });
    }

    {
        auto n = std::make_shared<long>(0);
        auto p = std::make_shared<std::uint64_t>(0);
        auto* c = cyclo->add_subcommand("h2", "order of the degree-2 cohomology piece for even n");
        c->fallthrough();
        c->add_option("--p", *p, "odd prime")->required();
        c->add_option("--n", *n, "even index")->required();
        c->callback([&opt, n, p] {
            common_checks(opt);
            std::string val = perfhom::h2_order_even(*p, *n).get_str();
            if (opt.format == "json")
                emit(opt, dump(scalar_json({{"name", "h2"}, {"p", *p}, {"n", *n}, {"value", val}})));
            else
                emit(opt, val + "\n");
        });
    }

    {
        auto n = std::make_shared<long>(0);
        auto p = std::make_shared<std::uint64_t>(0);
        auto* c = cyclo->add_subcommand("kurihara", "reflection vanishing test for odd n");
        c->fallthrough();
        c->add_option("--p", *p, "odd prime")->required();
        c->add_option("--n", *n, "odd index")->required();
        c->callback([&opt, n, p] {
            common_checks(opt);
            auto comp = perfhom::kurihara_component(*p, *n);
            std::string val = comp == perfhom::Component::zero ? "zero" : "possibly_nonzero";
            if (opt.format == "json")
                emit(opt, dump(scalar_json({{"name", "kurihara"}, {"p", *p}, {"n", *n}, {"value", val}})));
            else
                emit(opt, val + "\n");
        });
    }

    {
        auto n = std::make_shared<long>(0);
        auto p = std::make_shared<std::uint64_t>(0);
        auto* c = cyclo->add_subcommand("l0", "-B_{p-n} / (p-n) mod p for odd n");
        c->fallthrough();
        c->add_option("--p", *p, "odd prime")->required();
        c->add_option("--n", *n, "odd index")->required();
        c->callback([&opt, n, p] {
            common_checks(opt);
            std::uint64_t val = perfhom::l0_mod_p(*p, *n);
            if (opt.format == "json")
                emit(opt, dump(scalar_json({{"name", "l0"}, {"p", *p}, {"n", *n}, {"value", val}})));
            else
                emit(opt, std::to_string(val) + "\n");
        });
    }

    {
        auto p = std::make_shared<std::uint64_t>(0);
        auto kk = std::make_shared<std::uint64_t>(0);
        auto maxp = std::make_shared<std::uint64_t>(0);
        auto budget = std::make_shared<int>(10);
        auto* c = cyclo->add_subcommand("vandiver",
                                        "cyclotomic-unit power test for an irregular component");
        c->fallthrough();
        c->add_option("--p", *p, "odd prime (single-pair mode)");
        c->add_option("--k", *kk, "even index of the irregular pair");
        c->add_option("--max-p", *maxp, "scan every irregular pair with p <= max-p");
        c->add_option("--q-budget", *budget, "auxiliary primes to try per pair")->capture_default_str();
        c->callback([&opt, p, kk, maxp, budget] {
            common_checks(opt);
            auto outcome_json = [](const perfhom::VandiverOutcome& o) {
                json missed = json::array();
                for (auto q : o.missed_q) missed.push_back(q);
                return json{{"p", o.p},
                            {"k", o.k},
                            {"component_zero", o.component_zero},
                            {"witness_q", o.witness_q},
                            {"witness_residue", o.witness_residue},
                            {"q_tested", o.q_tested},
                            {"missed_q", std::move(missed)},
                            {"provenance", "exact"}};
            };
            auto outcome_text = [](const perfhom::VandiverOutcome& o) {
                std::ostringstream os;
                os << "p " << o.p << " k " << o.k << " zero " << (o.component_zero ? 1 : 0)
                   << " witness_q " << o.witness_q << " tested " << o.q_tested << "\n";
                return os.str();
            };
            if (*maxp > 0) {
                auto pairs = perfhom::irregular_pairs_upto(*maxp);
                std::ostringstream os;
                for (const auto& pr : pairs) {
                    auto o = perfhom::vandiver_component_test(pr.p, static_cast<std::uint64_t>(pr.k),
                                                              *budget);
                    if (opt.format == "json")
                        os << outcome_json(o).dump() << "\n"; // one certificate per line
                    else
                        os << outcome_text(o);
                }
                emit(opt, os.str());
                return;
            }
            if (*p == 0 || *kk == 0)
                throw std::invalid_argument("vandiver: need either --max-p or both --p and --k");
            auto o = perfhom::vandiver_component_test(*p, *kk, *budget);
            emit(opt, opt.format == "json" ? dump(outcome_json(o)) : outcome_text(o));
        });
    }

    {
        auto x = std::make_shared<std::uint64_t>(0);
        auto* c = cyclo->add_subcommand("heuristic", "density heuristic: sum of 1/p up to x");
        c->fallthrough();
        c->add_option("--x", *x, "upper limit (>= 37)")->required();
        c->callback([&opt, x] {
            common_checks(opt);
            auto h = perfhom::heuristic_sum(*x);
            if (opt.format == "json")
                emit(opt, dump(json{{"x", *x},
                                    {"prime_sum", h.prime_sum},
                                    {"paper_rhs", h.paper_rhs},
                                    {"mertens_rhs", h.mertens_rhs},
                                    {"prime_count", h.prime_count},
                                    {"provenance", "floating-point"}}));
            else {
                std::ostringstream os;
                os.precision(17);
                os << "prime_sum " << h.prime_sum << "\npaper_rhs " << h.paper_rhs << "\nmertens_rhs "
                   << h.mertens_rhs << "\nprime_count " << h.prime_count << "\n";
                emit(opt, os.str());
            }
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 64;
    } catch (const perfhom::precision_error& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
