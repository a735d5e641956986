#include "perfhom/jsonio.hpp"

#include <fstream>
#include <sstream>

namespace perfhom {

namespace {

json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return json(v.get_si());
    return json(v.get_str());
}

Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return Int(j.get<std::string>());
    throw std::invalid_argument("expected an integer or integer string");
}

} // namespace

json rat_to_json(const Rat& r) {
    if (r.get_den() == 1) return int_to_json(r.get_num());
    return json(rat_to_string(r));
}

Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    throw std::invalid_argument("expected a rational as integer or \"p/q\" string");
}

json form_to_json(const SymForm& A) {
    json rows = json::array();
    for (int i = 0; i < A.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < A.dim(); ++j) row.push_back(rat_to_json(A.at(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"n", A.dim()}, {"rows", std::move(rows)}};
}

SymForm form_from_json(const json& j) {
    if (!j.contains("n") || !j.contains("rows")) throw std::invalid_argument("form: missing n or rows");
    int n = j.at("n").get<int>();
    const json& rows = j.at("rows");
    if (n < 1 || !rows.is_array() || static_cast<int>(rows.size()) != n)
        throw std::invalid_argument("form: bad row count");
    std::vector<std::vector<Rat>> rr;
    for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw std::invalid_argument("form: bad column count");
        std::vector<Rat> r;
        for (const auto& e : row) r.push_back(rat_from_json(e));
        rr.push_back(std::move(r));
    }
    return SymForm::from_rows(rr);
}

json minvecs_to_json(const MinVecSet& mv) {
    json pairs = json::array();
    for (const auto& v : mv.vectors) {
        json p = json::array();
        for (const auto& x : v) p.push_back(int_to_json(x));
        pairs.push_back(std::move(p));
    }
    return json{{"mu", rat_to_json(mv.mu)}, {"pair_count", mv.pair_count()}, {"pairs", std::move(pairs)}};
}

json record_to_json(const PerfectFormRecord& rec) {
    return json{{"index", rec.index},
                {"form", form_to_json(rec.form)},
                {"det", rat_to_json(rec.det)},
                {"mu", rat_to_json(rec.minvecs.mu)},
                {"pair_count", rec.minvecs.pair_count()},
                {"aut_order", int_to_json(rec.aut_order)},
                {"minimal_vectors", minvecs_to_json(rec.minvecs)["pairs"]}};
}

json complex_to_json(const ChainComplexZ& cc) {
    json degrees = json::array();
    for (const auto& [k, cnt] : cc.cell_counts) {
        json d{{"k", k}, {"count", cnt}};
        auto it = cc.labels.find(k);
        if (it != cc.labels.end()) d["labels"] = it->second;
        degrees.push_back(std::move(d));
    }
    json boundaries = json::array();
    for (const auto& [k, m] : cc.boundary) {
        json entries = json::array();
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j)
                if (m.at(i, j) != 0) entries.push_back(json::array({i + 1, j + 1, int_to_json(m.at(i, j))}));
        boundaries.push_back(json{{"k", k}, {"rows", m.rows}, {"cols", m.cols}, {"entries", std::move(entries)}});
    }
    return json{{"n", cc.n},
                {"group", cc.group},
                {"provenance", "exact"},
                {"degrees", std::move(degrees)},
                {"boundaries", std::move(boundaries)}};
}

ChainComplexZ complex_from_json(const json& j) {
    ChainComplexZ cc;
    cc.n = j.value("n", 0);
    cc.group = j.value("group", std::string());
    if (j.contains("degrees"))
        for (const auto& d : j.at("degrees")) {
            int k = d.at("k").get<int>();
            cc.cell_counts[k] = d.at("count").get<int>();
            if (d.contains("labels")) cc.labels[k] = d.at("labels").get<std::vector<std::string>>();
        }
    if (j.contains("boundaries"))
        for (const auto& b : j.at("boundaries")) {
            int k = b.at("k").get<int>();
            IntMat m(b.at("rows").get<int>(), b.at("cols").get<int>());
            for (const auto& e : b.at("entries")) {
                int i = e.at(0).get<int>(), c = e.at(1).get<int>();
                if (i < 1 || i > m.rows || c < 1 || c > m.cols)
                    throw std::invalid_argument("complex: entry index out of range");
                m.at(i - 1, c - 1) = int_from_json(e.at(2));
            }
            cc.boundary[k] = std::move(m);
        }
    cc.validate();
    return cc;
}

std::string complex_to_text(const ChainComplexZ& cc) {
    std::ostringstream os;
    for (int k = cc.min_degree(); k <= cc.max_degree(); ++k) {
        IntMat m = cc.boundary_or_zero(k);
        int nnz = 0;
        for (const auto& e : m.a)
            if (e != 0) ++nnz;
        os << k << ' ' << m.rows << ' ' << m.cols << ' ' << nnz << '\n';
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j)
                if (m.at(i, j) != 0) os << (i + 1) << ' ' << (j + 1) << ' ' << m.at(i, j) << '\n';
    }
    return os.str();
}

ChainComplexZ complex_from_text(const std::string& text) {
    ChainComplexZ cc;
    std::istringstream is(text);
    int k = 0, rows = 0, cols = 0, nnz = 0;
    while (is >> k >> rows >> cols >> nnz) {
        if (rows < 0 || cols < 0 || nnz < 0) throw std::invalid_argument("complex: negative header field");
        IntMat m(rows, cols);
        for (int t = 0; t < nnz; ++t) {
            long i = 0, j = 0;
            std::string val;
            if (!(is >> i >> j >> val)) throw std::invalid_argument("complex: truncated entry list");
            if (i < 1 || i > rows || j < 1 || j > cols)
                throw std::invalid_argument("complex: entry index out of range");
            m.at(static_cast<int>(i - 1), static_cast<int>(j - 1)) = Int(val);
        }
        if (cc.boundary.count(k)) throw std::invalid_argument("complex: duplicate degree");
        if (cols > 0) cc.cell_counts[k] = cols;
        if (rows > 0) {
            auto it = cc.cell_counts.find(k - 1);
            if (it != cc.cell_counts.end() && it->second != rows)
                throw std::invalid_argument("complex: inconsistent dimensions across degrees");
            cc.cell_counts[k - 1] = rows;
        }
        cc.boundary[k] = std::move(m);
    }
    cc.validate();
    return cc;
}

ChainComplexZ load_complex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open complex file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    size_t p = text.find_first_not_of(" \t\r\n");
    if (p != std::string::npos && text[p] == '{') return complex_from_json(json::parse(text));
    return complex_from_text(text);
}

} // namespace perfhom
