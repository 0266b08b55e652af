#include "corrmate/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace corrmate {

// adding 0.0 turns -0.0 into 0.0
json complex_to_json(Complex z) { return json::array({z.real() + 0.0, z.imag() + 0.0}); }

Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    throw std::invalid_argument("expected [re, im], got " + j.dump());
}

json point_to_json(const SpherePoint& z) { return z.is_infinite() ? json("inf") : complex_to_json(z.value()); }

SpherePoint point_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return SpherePoint::infinity();
        throw std::invalid_argument("expected \"inf\", got " + j.dump());
    }
    return SpherePoint(complex_from_json(j));
}

json mobius_to_json(const MobiusMap& m) {
    json out = json::array();
    for (const auto& e : m.entries()) out.push_back(complex_to_json(e));
    return out;
}

MobiusMap mobius_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw std::invalid_argument("expected four matrix entries");
    return {complex_from_json(j[0]), complex_from_json(j[1]), complex_from_json(j[2]), complex_from_json(j[3])};
}

json poly_to_json(const Poly& p) {
    json out = json::array();
    for (const auto& c : p) out.push_back(complex_to_json(c));
    return out;
}

Poly poly_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a coefficient list");
    Poly p;
    for (const auto& c : j) p.push_back(complex_from_json(c));
    return p;
}

json map_to_json(const RationalMap& R) { return {{"num", poly_to_json(R.num())}, {"den", poly_to_json(R.den())}}; }

RationalMap map_from_json(const json& j) {
    const json& m = j.contains("map") ? j.at("map") : j;
    if (!m.contains("num") || !m.contains("den")) throw std::invalid_argument("map needs num and den");
    return RationalMap(poly_from_json(m.at("num")), poly_from_json(m.at("den")));
}

json config_to_json(const Config& cfg) {
    return {{"epsilon", cfg.epsilon},     {"root_tol", cfg.root_tol}, {"cluster_radius", cfg.cluster_radius},
            {"trust_radius", cfg.trust_radius}, {"max_iter", cfg.max_iter}, {"seed", cfg.seed},
            {"threads", cfg.threads}};
}

Config config_from_json(const json& j) {
    Config cfg;
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.root_tol = j.value("root_tol", cfg.root_tol);
    cfg.cluster_radius = j.value("cluster_radius", cfg.cluster_radius);
    cfg.trust_radius = j.value("trust_radius", cfg.trust_radius);
    cfg.max_iter = j.value("max_iter", cfg.max_iter);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.validate();
    return cfg;
}

json envelope(const Config& cfg) { return {{"schema", kSchema}, {"config", config_to_json(cfg)}}; }

void check_schema(const json& j) {
    if (!j.is_object() || !j.contains("schema")) throw std::invalid_argument("missing schema field");
    if (j.at("schema") != kSchema) throw std::invalid_argument("unsupported schema " + j.at("schema").dump());
}

json group_to_json(const GroupData& g) {
    json gens = json::object(), geos = json::object();
    for (int r = 1; r <= g.n(); ++r)
        for (int s = 1; s <= g.p(); ++s) {
            const std::string key = std::to_string(r) + "," + std::to_string(s);
            gens[key] = mobius_to_json(g.generator(r, s));
            geos[key] = json::array({complex_to_json(g.geodesic(r, s).u()), complex_to_json(g.geodesic(r, s).v())});
        }
    return {{"n", g.n()}, {"p", g.p()}, {"generators", gens}, {"geodesics", geos}};
}

json normal_form_to_json(const NormalFormResult& res) {
    json j;
    j["n"] = res.n;
    j["c1"] = point_to_json(res.c1);
    j["c2"] = point_to_json(res.c2);
    j["c3"] = point_to_json(res.c3);
    j["M1"] = mobius_to_json(res.M1);
    j["M2"] = mobius_to_json(res.M2);
    j["M3"] = mobius_to_json(res.M3);
    j["eta1"] = mobius_to_json(res.eta1);
    j["eta2"] = mobius_to_json(res.eta2);
    j["R1"] = poly_to_json(res.R1.num());
    j["R2"] = map_to_json(res.R2);
    j["a"] = complex_to_json(res.a);
    j["residuals"] = {{"final_identity", res.final_identity_residual}};
    if (res.cubic_residual >= 0.0) j["residuals"]["cubic"] = res.cubic_residual;
    return j;
}

namespace {

std::string format_coeff(Complex c) {
    std::ostringstream os;
    os << std::setprecision(12);
    if (c.imag() == 0.0)
        os << c.real();
    else if (c.real() == 0.0)
        os << c.imag() << "i";
    else
        os << "(" << c.real() << (c.imag() < 0 ? " - " : " + ") << std::abs(c.imag()) << "i)";
    return os.str();
}

std::string monomial(Complex c, int k) {
    std::string s;
    const bool unit = c == Complex(1.0);
    if (!unit || k == 0) s = format_coeff(c);
    if (k == 0) return s;
    if (!unit) s += " ";
    s += "z";
    if (k != 1) s += "^" + std::to_string(k);
    return s;
}

std::string format_poly(const Poly& p, int shift) {
    std::string s;
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
        if (p[k] == Complex(0.0)) continue;
        const std::string m = monomial(p[k], k - shift);
        if (s.empty())
            s = m;
        else if (m[0] == '-')
            s += " - " + m.substr(1);
        else
            s += " + " + m;
    }
    return s.empty() ? "0" : s;
}

} // namespace

std::string format_map(const RationalMap& R) {
    const Poly& d = R.den();
    bool monomial_den = true;
    for (std::size_t k = 0; k + 1 < d.size(); ++k) monomial_den = monomial_den && d[k] == Complex(0.0);
    if (monomial_den) return format_poly(R.num(), R.den_degree());
    return "(" + format_poly(R.num(), 0) + ") / (" + format_poly(d, 0) + ")";
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void write_json(const json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << std::setw(2) << j << "\n";
}

void write_cloud_csv(const std::vector<CloudPoint>& cloud, std::ostream& os) {
    os << "re,im,rank\n" << std::setprecision(17);
    for (const auto& c : cloud) {
        if (c.z.is_infinite())
            os << "inf,inf," << c.rank << "\n";
        else
            os << c.z.value().real() << "," << c.z.value().imag() << "," << c.rank << "\n";
    }
}

SpherePoint parse_point(const std::string& s) {
    if (s == "inf") return SpherePoint::infinity();
    const auto comma = s.find(',');
    try {
        std::size_t used = 0;
        if (comma == std::string::npos) {
            const double re = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return SpherePoint(re);
        }
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        const double re = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(s);
        const double im = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(s);
        return SpherePoint(re, im);
    } catch (const std::exception&) {
        throw std::invalid_argument("expected RE,IM or inf, got '" + s + "'");
    }
}

} // namespace corrmate
