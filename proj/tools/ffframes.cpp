// ffframes: exact-arithmetic toolkit for frames and equiangular lines over
// finite fields. One JSON input per invocation; reports go to stdout or
// --output. Exit codes: 0 property holds, 1 property fails, 2 invalid input,
// 3 budget exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ffframes/json_io.hpp"

using namespace ff;
using nlohmann::json;

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) raise(errc::invalid_json, "cannot open input file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_input(const std::string& path) {
    json j = json::parse(read_input(path), nullptr, false);
    require(!j.is_discarded(), errc::invalid_json, "input is not valid JSON");
    return j;
}

void write_report(const json& report, const std::string& output) {
    std::string text = report.dump(2) + "\n";
    if (output == "-" || output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output);
        if (!out) raise(errc::invalid_json, "cannot open output file " + output);
        out << text;
    }
}

std::vector<int> parse_index_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

struct Cli {
    std::string input = "-";
    std::string output = "-";
    std::string strategy = "auto";
    std::string beta_text;
    std::string gamma_text;
    std::string mode_text;
    std::string dedup_text;
    int s_min = -1, s_max = -1;
    int t = -1;
    int outside = -1;
    int ambient_dim = -1;
    uint64_t budget = 0;
    int workers = 0;
    std::string scale_text;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact frames and equiangular lines over finite fields"};
    app.require_subcommand(1);

    Cli opt;
    std::string cmd;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", opt.input, "input JSON file, - for stdin");
        sub->add_option("--output", opt.output, "output file, - for stdout");
        sub->callback([&, sub] { cmd = sub->get_name(); });
        return sub;
    };

    add_common(app.add_subcommand("field", "validate a field description"));
    add_common(app.add_subcommand("verify", "frame status report"));
    add_common(app.add_subcommand("tight", "tightness report"));
    add_common(app.add_subcommand("etf", "full ETF verification"));
    auto* realize = add_common(app.add_subcommand("realize", "realize a Gram matrix"));
    realize->add_option("--ambient-dim", opt.ambient_dim, "embed into this ambient dimension");
    auto* naimark = add_common(app.add_subcommand("naimark", "Naimark complement"));
    naimark->add_option("--scale", opt.scale_text, "scale factor for cI - G (element JSON)");
    auto* equiv = add_common(app.add_subcommand("equiv", "switching equivalence of two systems"));
    equiv->add_option("--strategy", opt.strategy, "auto|triples|general")
        ->check(CLI::IsMember({"auto", "triples", "general"}));
    auto* twograph = add_common(app.add_subcommand("twograph", "induced two-graph and regularity"));
    twograph->add_option("--beta", opt.beta_text, "square root of b (element JSON)");
    auto* simplex = add_common(app.add_subcommand("simplex", "enumerate regular simplices"));
    simplex->add_option("--s-min", opt.s_min, "smallest simplex dimension");
    simplex->add_option("--s-max", opt.s_max, "largest simplex dimension");
    auto* incoh = add_common(app.add_subcommand("incoherence", "incoherence numbers"));
    incoh->add_option("--beta", opt.beta_text, "square root of b (element JSON)")->required();
    auto* design = add_common(app.add_subcommand("design", "verify a block design"));
    design->add_option("--t", opt.t, "design strength t");
    auto* gamma = add_common(app.add_subcommand("gamma", "incoherent-set partition analysis"));
    gamma->add_option("--beta", opt.beta_text, "square root of b (element JSON)")->required();
    gamma->add_option("--gamma", opt.gamma_text, "comma list of 1-based set indices");
    gamma->add_option("--outside", opt.outside, "1-based outside vector index");
    auto* search = add_common(app.add_subcommand("search", "equiangular system search"));
    search->add_option("--budget", opt.budget, "candidate-vector budget");
    search->add_option("--workers", opt.workers, "worker threads");
    search->add_option("--mode", opt.mode_text, "all|first|count");
    search->add_option("--dedup", opt.dedup_text, "none|projective|switching_class");

    CLI11_PARSE(app, argc, argv);

    try {
        json report;
        int exit_code = 0;

        if (cmd == "field") {
            FieldPtr F = io::field_from_json(parse_input(opt.input));
            report["field"] = io::field_to_json(*F);
            report["order"] = F->size();
            report["case"] = F->case_u() ? "U" : "O";
            report["unimodular_count"] = F->unimodulars().size();
            if (!F->case_u())
                report["canonical_nonsquare"] = io::elem_to_json(*F, F->canonical_nonsquare());
        } else if (cmd == "verify" || cmd == "tight") {
            FrameSystem fs = io::frame_from_json(parse_input(opt.input));
            auto ts = frame_status(fs);
            report = io::tightness_to_json(*fs.field(), ts);
            report["n"] = fs.n();
            report["d"] = fs.d();
            if (auto eq = equiangular_of(fs)) {
                report["a"] = io::elem_to_json(*fs.field(), eq->a);
                report["b"] = io::elem_to_json(*fs.field(), eq->b);
            }
            exit_code = (cmd == "tight" ? ts.tight : ts.is_frame_for_span) ? 0 : 1;
        } else if (cmd == "etf") {
            FrameSystem fs = io::frame_from_json(parse_input(opt.input));
            try {
                auto rep = etf_verify(fs);
                report = io::etf_report_to_json(*fs.field(), rep);
                report["n"] = fs.n();
                report["d"] = fs.d();
                exit_code = rep.verdict ? 0 : 1;
            } catch (const error& e) {
                if (e.code() != errc::not_equiangular) throw;
                report["verdict"] = false;
                report["failure_reasons"] = {"not_equiangular"};
                exit_code = 1;
            }
        } else if (cmd == "realize") {
            json in = parse_input(opt.input);
            FieldPtr F = io::field_from_json(in.at("field"));
            Matrix gram = io::matrix_from_json(F, in.at("gram"));
            std::optional<int> ambient;
            if (opt.ambient_dim >= 0) ambient = opt.ambient_dim;
            else if (in.contains("ambient_dim")) ambient = in.at("ambient_dim").get<int>();
            FrameSystem fs = gram_realize(gram, ambient);
            report["frame"] = io::frame_to_json(fs);
            report["rank"] = rank_of(fs.synthesis);
            report["discriminant"] = io::discriminant_to_json(*F, discriminant_of(fs.space));
        } else if (cmd == "naimark") {
            FrameSystem fs = io::frame_from_json(parse_input(opt.input));
            try {
                std::optional<Elem> scale;
                if (!opt.scale_text.empty()) scale = io::elem_from_text(*fs.field(), opt.scale_text);
                FrameSystem psi = naimark_of(fs, scale);
                report["complement"] = io::frame_to_json(psi);
                report["complement_dim"] = psi.d();
                report["tightness"] = io::tightness_to_json(*fs.field(), frame_status(psi));
                if (auto eq = equiangular_of(psi)) {
                    report["a"] = io::elem_to_json(*fs.field(), eq->a);
                    report["b"] = io::elem_to_json(*fs.field(), eq->b);
                }
            } catch (const error& e) {
                if (e.code() != errc::zero_tight && e.code() != errc::not_tight &&
                    e.code() != errc::complement_verification_failed)
                    throw;
                report["complement"] = nullptr;
                report["error"] = e.what();
                exit_code = 1;
            }
        } else if (cmd == "equiv") {
            json in = parse_input(opt.input);
            require(in.contains("first") && in.contains("second"), errc::invalid_json,
                    "equiv input needs first and second frames");
            FrameSystem a = io::frame_from_json(in.at("first"));
            FrameSystem b = io::frame_from_json(in.at("second"));
            SwitchStrategy strat = SwitchStrategy::automatic;
            if (opt.strategy == "triples") strat = SwitchStrategy::triples;
            if (opt.strategy == "general") strat = SwitchStrategy::general;
            auto cert = switching_equiv(a, b, strat);
            report["switching"] = io::certificate_to_json(*a.field(), cert);
            auto uni = unitary_equiv(a, b);
            report["unitary"] = {{"equivalent", uni.equivalent}, {"reason", uni.reason}};
            exit_code = cert.equivalent ? 0 : 1;
        } else if (cmd == "twograph") {
            json in = parse_input(opt.input);
            TwoGraph tg;
            if (in.contains("vectors")) {
                FrameSystem fs = io::frame_from_json(in);
                require(!opt.beta_text.empty(), errc::invalid_json,
                        "twograph on a frame needs --beta");
                tg = two_graph_of(fs, io::elem_from_text(*fs.field(), opt.beta_text));
            } else {
                tg = io::two_graph_from_json(in);
            }
            try {
                auto an = two_graph_regularity(tg);
                report["two_graph"] = io::two_graph_to_json(tg);
                report["analysis"] = io::two_graph_analysis_to_json(an);
            } catch (const error& e) {
                if (e.code() != errc::invalid_two_graph) throw;
                report["two_graph"] = io::two_graph_to_json(tg);
                report["error"] = e.what();
                exit_code = 1;
            }
        } else if (cmd == "simplex") {
            FrameSystem fs = io::frame_from_json(parse_input(opt.input));
            std::optional<std::pair<int, int>> range;
            if (opt.s_min >= 0 || opt.s_max >= 0) {
                int lo = opt.s_min >= 0 ? opt.s_min : 2;
                int hi = opt.s_max >= 0 ? opt.s_max : frame_status(fs).span_dim;
                range = {lo, hi};
            }
            auto list = simplex_enumerate(fs, range);
            report["simplices"] = io::simplices_to_json(*fs.field(), list);
            report["count"] = list.size();
        } else if (cmd == "incoherence") {
            FrameSystem fs = io::frame_from_json(parse_input(opt.input));
            auto rep = incoherence_number(fs, io::elem_from_text(*fs.field(), opt.beta_text));
            report = io::incoherence_to_json(*fs.field(), rep);
        } else if (cmd == "design") {
            json in = parse_input(opt.input);
            auto d = io::design_input_from_json(in);
            if (opt.t > 0) d.t = opt.t;
            auto rep = design_verify(d.points, d.blocks, d.t);
            report = io::design_report_to_json(rep);
            exit_code = rep.is_design ? 0 : 1;
        } else if (cmd == "gamma") {
            FrameSystem fs = io::frame_from_json(parse_input(opt.input));
            Elem beta = io::elem_from_text(*fs.field(), opt.beta_text);
            IncoherentSet set;
            set.beta = beta;
            if (!opt.gamma_text.empty()) {
                set.indices = parse_index_list(opt.gamma_text);
            } else {
                set = incoherence_number(fs, beta).witness;
            }
            std::vector<int> outsiders;
            if (opt.outside > 0) {
                outsiders.push_back(opt.outside);
            } else {
                for (int v = 1; v <= fs.n(); ++v)
                    if (std::find(set.indices.begin(), set.indices.end(), v) == set.indices.end())
                        outsiders.push_back(v);
            }
            json arr = json::array();
            bool all_ok = true;
            for (int v : outsiders) {
                auto g = gamma_analyze(fs, set, v);
                json entry = io::gamma_to_json(*fs.field(), g);
                entry["outside"] = v;
                all_ok = all_ok && g.root_check && g.intersection_check;
                arr.push_back(std::move(entry));
            }
            report["set"] = set.indices;
            report["reports"] = std::move(arr);
            exit_code = all_ok ? 0 : 1;
        } else if (cmd == "search") {
            SearchSpec spec = io::search_spec_from_json(parse_input(opt.input));
            if (const char* env = std::getenv("FFF_BUDGET"))
                spec.budget = std::strtoull(env, nullptr, 10);
            if (opt.budget > 0) spec.budget = opt.budget;
            if (opt.workers > 0) spec.workers = opt.workers;
            if (!opt.mode_text.empty()) {
                if (opt.mode_text == "all") spec.mode = SearchMode::all;
                else if (opt.mode_text == "first") spec.mode = SearchMode::first;
                else if (opt.mode_text == "count") spec.mode = SearchMode::count;
                else raise(errc::invalid_json, "unknown mode " + opt.mode_text);
            }
            if (!opt.dedup_text.empty()) {
                if (opt.dedup_text == "none") spec.dedup = SearchDedup::none;
                else if (opt.dedup_text == "projective") spec.dedup = SearchDedup::projective;
                else if (opt.dedup_text == "switching_class")
                    spec.dedup = SearchDedup::switching_class;
                else raise(errc::invalid_json, "unknown dedup " + opt.dedup_text);
            }
            auto res = search_equiangular(spec);
            report = io::search_result_to_json(res);
            exit_code = res.count >= 1 ? 0 : 1;
        }

        write_report(report, opt.output);
        return exit_code;
    } catch (const error& e) {
        std::cerr << "ffframes: " << e.what() << "\n";
        return e.code() == errc::budget_exceeded ? 3 : 2;
    } catch (const json::exception& e) {
        std::cerr << "ffframes: invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ffframes: " << e.what() << "\n";
        return 2;
    }
}
