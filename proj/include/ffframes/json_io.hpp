#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ffframes/combinatorics.hpp"
#include "ffframes/search.hpp"

namespace ff::io {

using nlohmann::json;

// ---- fields and elements ----------------------------------------------

inline json field_to_json(const Field& F) {
    json j;
    j["p"] = F.characteristic();
    j["degree"] = F.degree();
    j["modulus"] = F.modulus();
    j["involution"] = F.case_u() ? "frobenius" : "identity";
    return j;
}

inline FieldPtr field_from_json(const json& j) {
    require(j.is_object() && j.contains("p") && j.contains("degree"), errc::invalid_json,
            "field needs p and degree");
    long long p = j.at("p").get<long long>();
    int degree = j.at("degree").get<int>();
    std::vector<long long> modulus;
    if (j.contains("modulus")) modulus = j.at("modulus").get<std::vector<long long>>();
    Involution inv = Involution::identity;
    if (j.contains("involution")) {
        std::string s = j.at("involution").get<std::string>();
        if (s == "frobenius")
            inv = Involution::frobenius;
        else
            require(s == "identity", errc::invalid_json, "unknown involution " + s);
    }
    return field_make(p, degree, std::move(modulus), inv);
}

inline json elem_to_json(const Field& F, Elem e) {
    if (F.degree() == 1) return json(F.coeffs(e)[0]);
    return json(F.coeffs(e));
}

inline Elem elem_from_json(const Field& F, const json& j) {
    if (j.is_number_integer()) return F.from_int(j.get<long long>());
    require(j.is_array(), errc::invalid_json, "element must be an integer or a coefficient list");
    return F.from_coeffs(j.get<std::vector<long long>>());
}

/// Parse an element from CLI text: either JSON ("5", "[1,2]") or a bare
/// integer string.
inline Elem elem_from_text(const Field& F, const std::string& text) {
    json j = json::parse(text, nullptr, false);
    require(!j.is_discarded(), errc::invalid_json, "cannot parse element: " + text);
    return elem_from_json(F, j);
}

// ---- matrices, spaces, frames ------------------------------------------

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(elem_to_json(*m.F, m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const FieldPtr& F, const json& j) {
    require(j.is_array(), errc::invalid_json, "matrix must be a list of rows");
    int rows = static_cast<int>(j.size());
    int cols = rows ? static_cast<int>(j.at(0).size()) : 0;
    Matrix m(F, rows, cols);
    for (int i = 0; i < rows; ++i) {
        require(j.at(i).is_array() && static_cast<int>(j.at(i).size()) == cols, errc::invalid_json,
                "matrix rows must have equal lengths");
        for (int c = 0; c < cols; ++c) m.at(i, c) = elem_from_json(*F, j.at(i).at(c));
    }
    return m;
}

inline json space_to_json(const HermitianSpace& V) {
    json j;
    j["field"] = field_to_json(*V.F);
    j["form"] = matrix_to_json(V.form);
    return j;
}

inline HermitianSpace space_from_json(const json& j) {
    FieldPtr F = field_from_json(j.at("field"));
    return space_make(matrix_from_json(F, j.at("form")));
}

inline json frame_to_json(const FrameSystem& fs) {
    json j;
    j["field"] = field_to_json(*fs.field());
    j["form"] = matrix_to_json(fs.space.form);
    j["vectors"] = matrix_to_json(fs.synthesis);
    return j;
}

inline FrameSystem frame_from_json(const json& j) {
    require(j.is_object() && j.contains("field") && j.contains("form") && j.contains("vectors"),
            errc::invalid_json, "frame needs field, form, vectors");
    FieldPtr F = field_from_json(j.at("field"));
    auto V = space_make(matrix_from_json(F, j.at("form")));
    return frame_make(V, matrix_from_json(F, j.at("vectors")));
}

// ---- combinatorial objects ----------------------------------------------

inline json two_graph_to_json(const TwoGraph& tg) {
    json j;
    j["n"] = tg.n;
    json triples = json::array();
    for (const auto& t : tg.coherent) triples.push_back(std::vector<int>{t[0], t[1], t[2]});
    j["coherent"] = std::move(triples);
    return j;
}

inline TwoGraph two_graph_from_json(const json& j) {
    require(j.is_object() && j.contains("n") && j.contains("coherent"), errc::invalid_json,
            "two-graph needs n and coherent");
    TwoGraph tg;
    tg.n = j.at("n").get<int>();
    for (const auto& t : j.at("coherent")) {
        auto v = t.get<std::vector<int>>();
        require(v.size() == 3, errc::invalid_json, "coherent entries must be triples");
        std::sort(v.begin(), v.end());
        require(v[0] >= 1 && v[2] <= tg.n && v[0] != v[1] && v[1] != v[2],
                errc::invalid_json, "triple entries must be distinct points in [1, n]");
        tg.coherent.push_back({v[0], v[1], v[2]});
    }
    std::sort(tg.coherent.begin(), tg.coherent.end());
    return tg;
}

struct DesignInput {
    int points = 0;
    std::vector<std::vector<int>> blocks;
    int t = 2;
};

inline json design_input_to_json(const DesignInput& d) {
    json j;
    j["points"] = d.points;
    j["blocks"] = d.blocks;
    j["t"] = d.t;
    return j;
}

inline DesignInput design_input_from_json(const json& j) {
    require(j.is_object() && j.contains("points") && j.contains("blocks"), errc::invalid_json,
            "design needs points and blocks");
    DesignInput d;
    d.points = j.at("points").get<int>();
    d.blocks = j.at("blocks").get<std::vector<std::vector<int>>>();
    if (j.contains("t")) d.t = j.at("t").get<int>();
    return d;
}

// ---- search spec ----------------------------------------------------------

inline json search_spec_to_json(const SearchSpec& s) {
    json j;
    j["field"] = field_to_json(*s.space.F);
    j["form"] = matrix_to_json(s.space.form);
    j["a"] = elem_to_json(*s.space.F, s.a);
    j["b"] = elem_to_json(*s.space.F, s.b);
    j["n"] = s.n_target ? json(*s.n_target) : json("max");
    j["mode"] = s.mode == SearchMode::all ? "all" : s.mode == SearchMode::first ? "first" : "count";
    j["dedup"] = s.dedup == SearchDedup::none
                     ? "none"
                     : s.dedup == SearchDedup::projective ? "projective" : "switching_class";
    j["etf_filter"] = s.etf_filter;
    j["budget"] = s.budget;
    j["workers"] = s.workers;
    return j;
}

inline SearchSpec search_spec_from_json(const json& j) {
    FieldPtr F = field_from_json(j.at("field"));
    auto V = space_make(matrix_from_json(F, j.at("form")));
    SearchSpec s{V, elem_from_json(*F, j.at("a")), elem_from_json(*F, j.at("b")), std::nullopt,
                 SearchMode::all};
    if (j.contains("n") && !(j.at("n").is_string() && j.at("n").get<std::string>() == "max"))
        s.n_target = j.at("n").get<int>();
    if (j.contains("mode")) {
        std::string m = j.at("mode").get<std::string>();
        if (m == "all")
            s.mode = SearchMode::all;
        else if (m == "first")
            s.mode = SearchMode::first;
        else if (m == "count")
            s.mode = SearchMode::count;
        else
            raise(errc::invalid_json, "unknown search mode " + m);
    }
    if (j.contains("dedup")) {
        std::string d = j.at("dedup").get<std::string>();
        if (d == "none")
            s.dedup = SearchDedup::none;
        else if (d == "projective")
            s.dedup = SearchDedup::projective;
        else if (d == "switching_class")
            s.dedup = SearchDedup::switching_class;
        else
            raise(errc::invalid_json, "unknown dedup " + d);
    }
    if (j.contains("etf_filter")) s.etf_filter = j.at("etf_filter").get<bool>();
    if (j.contains("budget")) s.budget = j.at("budget").get<uint64_t>();
    if (j.contains("workers")) s.workers = j.at("workers").get<int>();
    return s;
}

// ---- reports (one-way) ------------------------------------------------

inline json square_class_to_json(SquareClass c) {
    switch (c) {
        case SquareClass::zero: return "zero";
        case SquareClass::square: return "square";
        case SquareClass::nonsquare: return "nonsquare";
    }
    return "zero";
}

inline json discriminant_to_json(const Field& F, const Discriminant& d) {
    json j;
    j["class"] = square_class_to_json(d.cls);
    j["representative"] = elem_to_json(F, d.representative);
    return j;
}

inline json tightness_to_json(const Field& F, const TightnessReport& t) {
    json j;
    j["is_frame_for_ambient"] = t.is_frame_for_ambient;
    j["is_frame_for_span"] = t.is_frame_for_span;
    j["span_dim"] = t.span_dim;
    j["status"] = t.tight ? "tight" : "not_tight";
    if (t.tight) j["c"] = elem_to_json(F, t.c);
    j["ambiguous_c"] = t.ambiguous_c;
    j["totally_isotropic_tight"] = t.totally_isotropic_tight;
    return j;
}

inline json etf_report_to_json(const Field& F, const EtfReport& r) {
    json j;
    j["a"] = elem_to_json(F, r.params.a);
    j["b"] = elem_to_json(F, r.params.b);
    j["c"] = elem_to_json(F, r.c);
    j["welch_holds"] = r.welch_holds;
    j["triple_sum_holds"] = r.triple_sum_holds;
    j["verdict"] = r.verdict;
    j["criteria_applicable"] = r.criteria_applicable;
    j["certified_by_criteria"] = r.certified_by_criteria;
    json fails = json::array();
    for (auto [a, b] : r.triple_sum_failures) fails.push_back(std::vector<int>{a, b});
    j["triple_sum_failures"] = std::move(fails);
    j["failure_reasons"] = r.failure_reasons;
    j["tightness"] = tightness_to_json(F, r.tightness);
    return j;
}

inline json certificate_to_json(const Field& F, const SwitchingCertificate& c) {
    json j;
    j["equivalent"] = c.equivalent;
    j["strategy"] = c.strategy;
    if (c.equivalent) {
        json t = json::array();
        for (Elem e : c.t_diag) t.push_back(elem_to_json(F, e));
        j["t_diag"] = std::move(t);
    } else {
        j["obstruction"] = c.obstruction;
        j["obstruction_indices"] = c.obstruction_indices;
    }
    return j;
}

inline json gerzon_to_json(const GerzonReport& g) {
    json j;
    j["bound"] = g.bound;
    j["within"] = g.within;
    j["saturated"] = g.saturated;
    return j;
}

inline json two_graph_analysis_to_json(const TwoGraphAnalysis& a) {
    json j;
    j["regular"] = a.regular;
    if (a.regular) j["ell"] = a.ell;
    if (a.m_constant) j["m"] = a.m_quad;
    j["nontrivial"] = a.nontrivial;
    j["two_eigenvalue"] = a.two_eigenvalue;
    j["point_relation_holds"] = a.point_relation_holds;
    j["seidel"] = a.seidel;
    return j;
}

inline json simplices_to_json(const Field& F, const std::vector<SimplexInfo>& list) {
    json arr = json::array();
    for (const auto& s : list) {
        json j;
        j["indices"] = s.indices;
        j["s"] = s.s;
        j["c_prime"] = elem_to_json(F, s.c_prime);
        j["discriminant"] = discriminant_to_json(F, s.discr);
        if (s.criteria_agree) j["criteria_agree"] = *s.criteria_agree;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline json incoherence_to_json(const Field& F, const IncoherenceReport& r) {
    json j;
    j["inc"] = r.inc;
    j["inc_neg"] = r.inc_neg;
    j["inc_min"] = r.inc_min;
    json w;
    w["indices"] = r.witness.indices;
    w["beta"] = elem_to_json(F, r.witness.beta);
    w["linearly_independent"] = r.witness.linearly_independent;
    j["witness"] = std::move(w);
    if (r.bound_ok) j["bound_ok"] = *r.bound_ok;
    return j;
}

inline json gamma_to_json(const Field& F, const GammaReport& g) {
    json j;
    j["gamma1"] = g.gamma1;
    j["gamma2"] = g.gamma2;
    j["g1"] = g.g1;
    j["g2"] = g.g2;
    j["rho"] = elem_to_json(F, g.rho);
    j["root_check"] = g.root_check;
    j["intersection_check"] = g.intersection_check;
    j["smallest_root_check"] = g.smallest_root_check;
    return j;
}

inline json design_report_to_json(const DesignReport& r) {
    json j;
    j["is_design"] = r.is_design;
    j["t"] = r.t;
    j["points"] = r.n_points;
    j["k"] = r.k;
    j["lambda"] = r.lambda;
    j["r"] = r.r;
    j["r_constant"] = r.r_constant;
    j["identity_bk_nr"] = r.identity_bk_nr;
    j["identity_rk_nl"] = r.identity_rk_nl;
    j["intersection_numbers"] = r.intersection_numbers;
    j["quasi_symmetric"] = r.quasi_symmetric;
    json f;
    f["applicable"] = r.fisher.applicable;
    f["holds"] = r.fisher.holds;
    f["r_equals_k"] = r.fisher.r_equals_k;
    j["fisher"] = std::move(f);
    j["blocks"] = r.blocks;
    return j;
}

inline json design_extraction_to_json(const DesignExtraction& e) {
    json j;
    j["ell"] = e.ell;
    j["g1"] = e.g1;
    j["g2"] = e.g2;
    j["b1"] = design_report_to_json(e.b1);
    j["b2"] = design_report_to_json(e.b2);
    if (e.merged) j["merged"] = design_report_to_json(*e.merged);
    if (e.four_design) j["four_design"] = design_report_to_json(*e.four_design);
    j["lambda_formula_ok"] = e.lambda_formula_ok;
    j["quasi_prediction_ok"] = e.quasi_prediction_ok;
    j["symmetric_case_ok"] = e.symmetric_case_ok;
    j["sum_identity_ok"] = e.sum_identity_ok;
    return j;
}

inline json search_result_to_json(const SearchResult& r) {
    json j;
    j["count"] = r.count;
    json systems = json::array();
    for (const auto& fs : r.systems) systems.push_back(frame_to_json(fs));
    j["systems"] = std::move(systems);
    json stats;
    stats["nodes_visited"] = r.stats.nodes_visited;
    stats["pruned"] = r.stats.pruned;
    stats["wall_time_s"] = r.stats.wall_time_s;
    j["stats"] = std::move(stats);
    return j;
}

}  // namespace ff::io
