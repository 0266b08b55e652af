#include "corrmate/cli.hpp"

#include "corrmate/bers.hpp"
#include "corrmate/circle.hpp"
#include "corrmate/correspondence.hpp"
#include "corrmate/errors.hpp"
#include "corrmate/fuchsian.hpp"
#include "corrmate/io.hpp"
#include "corrmate/normal_form.hpp"
#include "corrmate/render.hpp"
#include "corrmate/verify.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace corrmate {

namespace {

struct Options {
    Config cfg;
    int n = 0, p = 0;
    std::string out, group, map, z, family, params = "[]", grid, view = "-2,2,-2,2", px = "512x512", chart = "plane";
    int samples = 4096, depth = 40, budget = 100000, palette = 0;
};

std::vector<double> parse_numbers(const std::string& s, std::size_t count, const char* what) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("bad number in ") + what + ": '" + tok + "'");
        }
    }
    if (v.size() != count) throw std::invalid_argument(std::string(what) + " needs " + std::to_string(count) + " comma-separated numbers");
    return v;
}

Viewport parse_view(const std::string& s) {
    const auto v = parse_numbers(s, 4, "--view");
    return {v[0], v[1], v[2], v[3]};
}

void parse_px(const std::string& s, int& w, int& h) {
    const auto x = s.find('x');
    if (x == std::string::npos) throw std::invalid_argument("--px expects WxH");
    const auto v = parse_numbers(s.substr(0, x) + "," + s.substr(x + 1), 2, "--px");
    w = static_cast<int>(v[0]);
    h = static_cast<int>(v[1]);
    if (w != v[0] || h != v[1]) throw std::invalid_argument("--px expects integers");
}

json load(const std::string& path) {
    json j = read_json(path);
    check_schema(j);
    return j;
}

// n and p come from the flags when given, else from the map file
void fill_np(const json& j, Options& o) {
    if (o.n == 0 && j.contains("n")) o.n = j.at("n").get<int>();
    if (o.p == 0 && j.contains("p")) o.p = j.at("p").get<int>();
    if (o.n < 1 || o.p < 1) throw std::invalid_argument("--n and --p are required (the map file does not record them)");
}

void emit(const json& j, const Options& o, std::ostream& out) {
    if (o.out.empty())
        out << std::setw(2) << j << "\n";
    else
        write_json(j, o.out);
}

int cmd_group_build(Options& o, std::ostream& out) {
    json j = envelope(o.cfg);
    j.update(group_to_json(build_group(o.n, o.p)));
    emit(j, o, out);
    if (!o.out.empty()) out << "wrote " << o.out << "\n";
    return 0;
}

FactorCircleMap load_circle(const Options& o) {
    const json j = load(o.group);
    const int n = j.at("n").get<int>(), p = j.at("p").get<int>();
    GroupData g = build_group(n, p);
    // the file is only trusted if it matches the construction
    for (int s = 1; s <= p; ++s)
        if (j.contains("generators") && j["generators"].contains("1," + std::to_string(s)) &&
            mobius_from_json(j["generators"]["1," + std::to_string(s)]).distance(g.generator(1, s)) > 1e-9)
            throw AuditError("group file generators do not match (n, p) = (" + std::to_string(n) + "," + std::to_string(p) + ")");
    return FactorCircleMap(std::move(g), o.cfg.epsilon);
}

int cmd_circle_eval(Options& o, std::ostream& out) {
    const FactorCircleMap F = load_circle(o);
    const SpherePoint z = parse_point(o.z);
    json j = envelope(o.cfg);
    j["z"] = point_to_json(z);
    j["value"] = point_to_json(F(z));
    out << std::setw(2) << j << "\n";
    return 0;
}

int cmd_circle_conjugacy(Options& o, std::ostream& out) {
    if (o.samples < 1 || o.depth < 1) throw std::invalid_argument("--samples and --depth must be positive");
    const FactorCircleMap F = load_circle(o);
    const CircleConjugacy h(F);
    const std::int64_t N = o.samples, d = F.degree();
    std::ofstream f;
    std::ostream* os = &out;
    if (!o.out.empty()) {
        f.open(o.out);
        if (!f) throw std::runtime_error("cannot open " + o.out);
        os = &f;
    }
    *os << "theta,re,im,defect\n" << std::setprecision(17);
    double worst = 0.0;
    for (std::int64_t i = 0; i < N; ++i) {
        const SpherePoint a = h(i, N, o.depth);
        const double defect = chordal_distance(F(a), h((i * d) % N, N, o.depth));
        worst = std::max(worst, defect);
        *os << static_cast<double>(i) / static_cast<double>(N) << "," << a.value().real() << "," << a.value().imag() << "," << defect
            << "\n";
    }
    if (!o.out.empty()) out << "wrote " << o.out << " (max defect " << worst << ")\n";
    return 0;
}

int cmd_bers_build(Options& o, std::ostream& out, std::ostream& err) {
    json params;
    try {
        params = json::parse(o.params);
    } catch (const json::parse_error&) {
        throw std::invalid_argument("--params is not valid JSON");
    }
    if (!params.is_array()) throw std::invalid_argument("--params expects a JSON array of numbers or [re, im] pairs");
    std::vector<Complex> values;
    for (const auto& v : params) values.push_back(complex_from_json(v));

    std::optional<RationalMap> R;
    if (o.family == "a") {
        if (o.n != 1 || o.p % 2 != 0 || o.p < 4) throw std::invalid_argument("family a needs n = 1 and even p >= 4");
        R = build_family_a({o.p / 2, values});
    } else if (o.family == "b") {
        if (o.n != 1 || o.p % 2 != 1 || o.p < 5) throw std::invalid_argument("family b needs n = 1 and odd p >= 5");
        R = build_family_b({(o.p - 1) / 2, values});
    } else {
        if (o.n < 3) throw std::invalid_argument("family c needs n >= 3");
        R = build_family_c({o.n, o.p, values.empty() ? default_critical_data(o.p) : values}, o.cfg);
    }
    const auto rep = validate_family(*R, o.n, o.p, o.cfg);
    json j = envelope(o.cfg);
    j["family"] = o.family;
    j["n"] = o.n;
    j["p"] = o.p;
    j["params"] = params;
    j["map"] = map_to_json(*R);
    j["formula"] = format_map(*R);
    emit(j, o, out);
    if (!o.out.empty()) out << "wrote " << o.out << ": R(z) = " << j["formula"].get<std::string>() << "\n";
    if (!rep.passed()) {
        err << "validation failed: " << rep.first_failure() << "\n";
        return 1;
    }
    return 0;
}

int cmd_bers_validate(Options& o, std::ostream& out) {
    const json j = load(o.map);
    fill_np(j, o);
    const auto rep = validate_family(map_from_json(j), o.n, o.p, o.cfg);
    for (const auto& c : rep.clauses) out << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    return rep.passed() ? 0 : 1;
}

int cmd_corr_forward(Options& o, std::ostream& out) {
    const Correspondence C(map_from_json(load(o.map)), o.cfg);
    const SpherePoint z = parse_point(o.z);
    json pts = json::array();
    for (const auto& f : C.forward(z)) pts.push_back({{"point", point_to_json(f.point)}, {"multiplicity", f.multiplicity}});
    json j = envelope(o.cfg);
    j["z"] = point_to_json(z);
    j["forward"] = pts;
    out << std::setw(2) << j << "\n";
    return 0;
}

Classifier make_classifier(Options& o) {
    const json j = load(o.map);
    fill_np(j, o);
    return Classifier(Correspondence(map_from_json(j), o.cfg), DomainSpec::unit_circle(), o.p, o.cfg.max_iter);
}

void print_counts(const LabelRaster& r, std::ostream& out) {
    for (Label l : {Label::Tiling, Label::K1, Label::K2, Label::Limit, Label::Undecided}) out << " " << label_name(l) << "=" << r.count(l);
    out << "\n";
}

int cmd_corr_classify(Options& o, std::ostream& out) {
    const auto g = parse_numbers(o.grid, 6, "--grid");
    RasterJob job;
    job.view = {g[0], g[1], g[2], g[3]};
    job.width = static_cast<int>(g[4]);
    job.height = static_cast<int>(g[5]);
    if (job.width != g[4] || job.height != g[5]) throw std::invalid_argument("--grid W and H must be integers");
    job.max_iter = o.cfg.max_iter;
    job.validate();
    const Classifier K = make_classifier(o);
    const auto r = render_classification(K, job, o.cfg.threads);
    if (o.out.empty()) throw std::invalid_argument("--out is required");
    write_labels(r, o.out);
    out << "wrote " << o.out << ":";
    print_counts(r, out);
    return 0;
}

int cmd_corr_cloud(Options& o, std::ostream& out) {
    if (o.budget < 1) throw std::invalid_argument("--budget must be >= 1");
    const Correspondence C(map_from_json(load(o.map)), o.cfg);
    const auto cloud = grand_orbit_cloud(C, o.budget, o.cfg.seed);
    if (o.out.empty()) {
        write_cloud_csv(cloud, out);
        return 0;
    }
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot open " + o.out);
    write_cloud_csv(cloud, f);
    out << "wrote " << o.out << " (" << cloud.size() << " points)\n";
    return 0;
}

int cmd_normalform(Options& o, std::ostream& out) {
    const json m = load(o.map);
    if (o.n == 0 && m.contains("n")) o.n = m.at("n").get<int>();
    if (o.n < 3) throw std::invalid_argument("--n must be >= 3");
    const auto res = bp_normalize(map_from_json(m), o.n, o.cfg);
    json j = envelope(o.cfg);
    j.update(normal_form_to_json(res));
    emit(j, o, out);
    if (!o.out.empty()) out << "wrote " << o.out << ": a = " << res.a << ", identity residual " << res.final_identity_residual << "\n";
    return 0;
}

RasterJob render_job(const Options& o) {
    RasterJob job;
    job.view = parse_view(o.view);
    parse_px(o.px, job.width, job.height);
    job.max_iter = o.cfg.max_iter;
    job.palette = o.palette;
    if (o.chart == "reciprocal")
        job.chart = Chart::Reciprocal;
    else if (o.chart != "plane")
        throw std::invalid_argument("--chart must be plane or reciprocal");
    job.validate();
    return job;
}

int cmd_render_classify(Options& o, std::ostream& out) {
    const RasterJob job = render_job(o);
    const Classifier K = make_classifier(o);
    const auto r = render_classification(K, job, o.cfg.threads);
    write_ppm(colorize(r, job.palette), o.out);
    out << "wrote " << o.out << ":";
    print_counts(r, out);
    return 0;
}

int cmd_render_cloud(Options& o, std::ostream& out) {
    if (o.budget < 1) throw std::invalid_argument("--budget must be >= 1");
    const RasterJob job = render_job(o);
    const Correspondence C(map_from_json(load(o.map)), o.cfg);
    write_ppm(render_cloud(job, grand_orbit_cloud(C, o.budget, o.cfg.seed)), o.out);
    out << "wrote " << o.out << "\n";
    return 0;
}

int cmd_verify(Options& o, std::ostream& out) {
    if (o.n * o.p < 3) throw std::invalid_argument("verify needs np >= 3");
    int failed = 0;
    for (const auto& s : verify_suites()) {
        SuiteResult r;
        try {
            r = s.run(o.n, o.p, o.cfg);
        } catch (const std::exception& e) {
            r = {SuiteResult::Status::Fail, e.what()};
        }
        const char* tag = r.status == SuiteResult::Status::Pass ? "PASS" : r.status == SuiteResult::Status::Fail ? "FAIL" : "SKIP";
        if (r.status == SuiteResult::Status::Fail) ++failed;
        out << tag << " " << s.name << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
    }
    out << (failed == 0 ? "all suites passed" : std::to_string(failed) + " suite(s) failed") << "\n";
    return failed == 0 ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"corrmate: correspondences, Bowen-Series maps and their matings"};
    app.name("corrmate");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--threads", o.cfg.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", o.cfg.seed, "random seed")->envname("CORRMATE_SEED");
    app.add_option("--maxiter", o.cfg.max_iter, "iteration budget")->check(CLI::PositiveNumber);

    int (*action)(Options&, std::ostream&) = nullptr;
    bool bers_build = false;

    auto np = [&](CLI::App* c, bool required) {
        auto* n = c->add_option("--n", o.n, "rotation order n")->check(CLI::PositiveNumber);
        auto* p = c->add_option("--p", o.p, "number of arcs p")->check(CLI::PositiveNumber);
        if (required) {
            n->required();
            p->required();
        }
    };

    auto* group = app.add_subcommand("group", "Fuchsian side-pairing groups")->require_subcommand(1);
    auto* gb = group->add_subcommand("build", "write generators and geodesics");
    np(gb, true);
    gb->add_option("--out", o.out, "output JSON (default: stdout)");
    gb->callback([&] { action = cmd_group_build; });

    auto* circle = app.add_subcommand("circle", "the factor Bowen-Series circle map")->require_subcommand(1);
    auto* ce = circle->add_subcommand("eval", "evaluate the map at a point");
    ce->add_option("--group", o.group, "group JSON")->required();
    ce->add_option("--z", o.z, "RE,IM")->required();
    ce->callback([&] { action = cmd_circle_eval; });
    auto* cc = circle->add_subcommand("conjugacy", "tabulate the conjugacy to angle multiplication");
    cc->add_option("--group", o.group, "group JSON")->required();
    cc->add_option("--samples", o.samples, "uniform angles");
    cc->add_option("--depth", o.depth, "inverse branches per angle");
    cc->add_option("--out", o.out, "output CSV (theta,re,im,defect)");
    cc->callback([&] { action = cmd_circle_conjugacy; });

    auto* bers = app.add_subcommand("bers", "Bers-slice rational maps")->require_subcommand(1);
    auto* bb = bers->add_subcommand("build", "build a family map");
    bb->add_option("--family", o.family, "a, b or c")->required()->check(CLI::IsMember({"a", "b", "c"}));
    np(bb, true);
    bb->add_option("--params", o.params, "JSON array: free coefficients (a, b) or critical data (c)");
    bb->add_option("--out", o.out, "output JSON (default: stdout)");
    bb->callback([&] { bers_build = true; });
    auto* bv = bers->add_subcommand("validate", "audit the critical structure of a map");
    bv->add_option("--map", o.map, "map JSON")->required();
    np(bv, false);
    bv->callback([&] { action = cmd_bers_validate; });

    auto* corr = app.add_subcommand("corr", "the correspondence")->require_subcommand(1);
    auto* cf = corr->add_subcommand("forward", "forward branches at a point");
    cf->add_option("--map", o.map, "map JSON")->required();
    cf->add_option("--z", o.z, "RE,IM or inf")->required();
    cf->callback([&] { action = cmd_corr_forward; });
    auto* ck = corr->add_subcommand("classify", "label a grid of points");
    ck->add_option("--map", o.map, "map JSON")->required();
    ck->add_option("--grid", o.grid, "X0,X1,Y0,Y1,W,H")->required();
    ck->add_option("--out", o.out, "labels.bin")->required();
    np(ck, false);
    ck->callback([&] { action = cmd_corr_classify; });
    auto* cl = corr->add_subcommand("cloud", "grand orbit of the marked point");
    cl->add_option("--map", o.map, "map JSON")->required();
    cl->add_option("--budget", o.budget, "number of points");
    cl->add_option("--out", o.out, "output CSV (re,im,rank; default: stdout)");
    cl->callback([&] { action = cmd_corr_cloud; });

    auto* nf = app.add_subcommand("normalform", "normal form of a p = 1 map");
    nf->add_option("--map", o.map, "map JSON")->required();
    nf->add_option("--n", o.n, "degree n")->check(CLI::PositiveNumber);
    nf->add_option("--out", o.out, "output JSON (default: stdout)");
    nf->callback([&] { action = cmd_normalform; });

    auto* render = app.add_subcommand("render", "images")->require_subcommand(1);
    for (auto [name, what] : {std::pair{"classify", "labels colored by set"}, std::pair{"cloud", "grand orbit density"}}) {
        auto* r = render->add_subcommand(name, what);
        r->add_option("--map", o.map, "map JSON")->required();
        r->add_option("--view", o.view, "X0,X1,Y0,Y1");
        r->add_option("--px", o.px, "WxH");
        r->add_option("--chart", o.chart, "plane or reciprocal");
        r->add_option("--out", o.out, "output PPM")->required();
        if (std::string(name) == "classify") {
            r->add_option("--palette", o.palette, "0 color, 1 gray")->check(CLI::Range(0, 1));
            np(r, false);
            r->callback([&] { action = cmd_render_classify; });
        } else {
            r->add_option("--budget", o.budget, "number of points");
            r->callback([&] { action = cmd_render_cloud; });
        }
    }

    auto* ver = app.add_subcommand("verify", "run the invariant suites for (n, p)");
    np(ver, true);
    ver->callback([&] { action = cmd_verify; });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        o.cfg.validate();
        if (bers_build) return cmd_bers_build(o, out, err);
        return action(o, out);
    } catch (const AuditError& e) {
        err << "audit failed: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        err << "error: malformed input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "failed: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace corrmate
