#include "corrmate/verify.hpp"

#include "corrmate/bers.hpp"
#include "corrmate/circle.hpp"
#include "corrmate/correspondence.hpp"
#include "corrmate/errors.hpp"
#include "corrmate/fuchsian.hpp"
#include "corrmate/normal_form.hpp"

#include <random>
#include <sstream>

namespace corrmate {

std::optional<RationalMap> base_map(int n, int p, const Config& cfg) {
    if (n == 1 && p % 2 == 0) return build_family_a({p / 2, std::vector<Complex>(std::max(0, p / 2 - 2), 0.0)});
    if (n == 1) return build_family_b({(p - 1) / 2, std::vector<Complex>(std::max(0, (p - 1) / 2 - 1), 0.0)});
    if (n >= 3) return build_family_c({n, p, default_critical_data(p)}, cfg);
    return std::nullopt;
}

namespace {

using Status = SuiteResult::Status;

SuiteResult pass(const std::string& d) { return {Status::Pass, d}; }
SuiteResult fail(const std::string& d) { return {Status::Fail, d}; }
SuiteResult skip(const std::string& d) { return {Status::Skip, d}; }
SuiteResult check(bool ok, const std::string& d) { return ok ? pass(d) : fail(d); }

std::string sci(double x) {
    std::ostringstream os;
    os.precision(2);
    os << std::scientific << x;
    return os.str();
}

SuiteResult side_pairing(int n, int p, const Config&) {
    const GroupData g = build_group(n, p);
    double worst = 0.0;
    for (int s = 1; s <= p; ++s) {
        worst = std::max(worst, (g.generator(1, s) * g.generator(1, p + 1 - s)).distance(MobiusMap::identity()));
        for (int r = 1; r <= n; ++r)
            worst = std::max(worst, g.generator(r, s).distance(g.rotation_power(r - 1) * g.generator(1, s) * g.rotation_power(1 - r)));
    }
    return check(worst < 1e-12, "residual " + sci(worst));
}

SuiteResult orbifold(int n, int p, const Config&) {
    const auto sig = quotient_signature(n, p, true);
    if (!sig.is_hyperbolic()) return fail("quotient is not hyperbolic");
    if (n == 2) return skip("order-2 cone points of both kinds; no inverse map");
    const auto back = orbifold_to_np(sig.punctures, sig.order2_points, sig.orderN_points, sig.order_value);
    return check(back == GroupParameters{n, p, n * p - 1}, "teich dimension " + std::to_string(teich_dimension(n, p)));
}

SuiteResult circle_degree(int n, int p, const Config&) {
    const auto rep = circle_lift(FactorCircleMap(build_group(n, p)));
    return check(rep.degree == n * p - 1 && rep.monotone,
                 "degree " + std::to_string(rep.degree) + (rep.monotone ? ", monotone" : ", not monotone"));
}

SuiteResult factor_critical(int n, int p, const Config&) {
    const auto cps = critical_points_fbs(FactorCircleMap(build_group(n, p)));
    if (n == 1) return check(cps.empty(), std::to_string(cps.size()) + " critical points");
    bool ok = static_cast<int>(cps.size()) == p;
    for (const auto& c : cps) ok = ok && c.multiplicity == n - 1 && chordal_distance(c.value, SpherePoint(0.0)) < 1e-12;
    return check(ok, std::to_string(cps.size()) + " critical points of multiplicity " + std::to_string(n - 1));
}

SuiteResult markov(int n, int p, const Config&) {
    try {
        const auto part = markov_partition(FactorCircleMap(build_group(n, p)));
        return check(part.is_markov, std::to_string(part.pieces()) + " arcs");
    } catch (const AuditError& e) {
        return fail(e.what());
    }
}

SuiteResult conjugacy(int n, int p, const Config&) {
    const FactorCircleMap F(build_group(n, p));
    const CircleConjugacy h(F);
    const int d = n * p - 1, N = 512;
    double worst = 0.0, prev = -1.0;
    bool monotone = true;
    for (int i = 0; i < N; ++i) {
        const SpherePoint a = h(i, N, 40);
        worst = std::max(worst, chordal_distance(F(a), h((static_cast<std::int64_t>(i) * d) % N, N, 40)));
        const double t = turns_of(a.value());
        if (i > 0 && t <= prev) monotone = false;
        prev = t;
    }
    return check(worst < 1e-6 && monotone, "defect " + sci(worst) + (monotone ? ", monotone" : ", not monotone"));
}

SuiteResult bers_family(int n, int p, const Config& cfg) {
    const auto R = base_map(n, p, cfg);
    if (!R) return skip("no family for n = 2");
    const auto rep = validate_family(*R, n, p, cfg);
    if (!rep.passed()) return fail(rep.first_failure());
    const Poly Q = critical_polynomial(*R, n, p);
    const Poly rev = poly_reverse(Q, p);
    double sym = 1e300;
    for (double sign : {1.0, -1.0}) {
        double m = 0.0;
        for (int k = 0; k <= p; ++k) m = std::max(m, std::abs(rev[k] - sign * Q[k]));
        sym = std::min(sym, m);
    }
    bool ok = sym < 1e-10 && std::abs(poly_eval(Q, 1.0)) < 1e-10 && R->den_degree() == n * p - 1;
    if (p % 2 == 0) ok = ok && std::abs(poly_eval(Q, -1.0)) < 1e-10;
    return check(ok, "inversion residual " + sci(sym));
}

SuiteResult branches(int n, int p, const Config& cfg) {
    const auto R = base_map(n, p, cfg);
    if (!R) return skip("no family for n = 2");
    const Correspondence C(*R, cfg);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double trip = 0.0, dual = 0.0;
    for (int i = 0; i < 100; ++i) {
        const SpherePoint z(Complex(u(rng), u(rng)));
        const auto fw = flatten(C.forward(z));
        if (static_cast<int>(fw.size()) != C.d()) return fail("forward fiber of size " + std::to_string(fw.size()));
        for (const auto& w : fw) trip = std::max(trip, distance_to_set(z, flatten(C.backward(w))));
        const auto bw = flatten(C.backward(z));
        std::vector<SpherePoint> dualset;
        for (const auto& x : flatten(C.forward(eta(z)))) dualset.push_back(eta(x));
        for (const auto& x : bw) dual = std::max(dual, distance_to_set(x, dualset));
        for (const auto& x : dualset) dual = std::max(dual, distance_to_set(x, bw));
    }
    return check(trip < 1e-7 && dual < 1e-8, "round trip " + sci(trip) + ", duality " + sci(dual));
}

SuiteResult partition(int n, int p, const Config& cfg) {
    const auto R = base_map(n, p, cfg);
    if (!R) return skip("no family for n = 2");
    try {
        const Classifier K(Correspondence(*R, cfg), DomainSpec::unit_circle(), p, cfg.max_iter);
        if (K.classify(SpherePoint::infinity()).label != Label::K1) return fail("infinity is not in K1");
        if (K.classify(SpherePoint(0.0)).label != Label::K2) return fail("0 is not in K2");
        if (n >= 2)
            for (const auto& x : validate_family(*R, n, p, cfg).tiling_critical)
                if (K.classify(SpherePoint(x)).label != Label::Tiling) return fail("a tiling critical point is not tiling");
        return pass(K.audit().detail);
    } catch (const AuditError& e) {
        return fail(e.what());
    }
}

SuiteResult deck(int n, int p, const Config& cfg) {
    if (n < 2) return skip("no deck transformation for n = 1");
    const auto R = base_map(n, p, cfg);
    if (!R) return skip("no family for n = 2");
    const DeckTransform tau(*R, n, p, cfg);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double cyc = 0.0, fib = 0.0;
    for (const Complex& x : tau.centers())
        for (int i = 0; i < 20; ++i) {
            const Complex z = x + std::polar(0.8 * cfg.trust_radius * u(rng), 2 * kPi * u(rng));
            // tau^k and back; images in other charts may leave the trust radius, so no iteration
            for (int k = 1; k < n * p; ++k) {
                const Complex w = tau.apply(z, k);
                fib = std::max(fib, chordal_distance((*R)(w), (*R)(z)));
                if (tau.chart_of(w) >= 0) cyc = std::max(cyc, std::abs(tau.apply(w, n * p - k) - z));
            }
        }
    return check(cyc < 1e-6 && fib < 1e-9, "tau^k tau^(np-k) " + sci(cyc) + ", fiber " + sci(fib));
}

SuiteResult pingpong(int n, int p, const Config& cfg) {
    if (n < 2) return skip("no deck transformation for n = 1");
    if (p != 1) return skip("default base path only for p = 1");
    const auto R = base_map(n, p, cfg);
    if (!R) return skip("no family for n = 2");
    const DeckTransform tau(*R, n, p, cfg);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Complex> samples;
    for (int i = 0; i < 30; ++i)
        samples.push_back(tau.centers()[0] + std::polar(cfg.trust_radius * (0.1 + 0.7 * u(rng)), 2 * kPi * u(rng)));
    const auto rep = pingpong_check(*R, n, p, samples, 6, 1e-4, {}, cfg);
    return check(rep.passed, std::to_string(rep.words) + " words, min displacement " + sci(rep.min_displacement));
}

SuiteResult normal_form(int n, int p, const Config& cfg) {
    if (p != 1 || n < 3) return skip("normal form needs p = 1 and n >= 3");
    const auto res = bp_normalize(*base_map(n, p, cfg), n, cfg);
    bool ok = res.R1.is_polynomial() && res.R1.degree() == n && res.final_identity_residual < 1e-8;
    if (n == 3) ok = ok && res.cubic_residual < 1e-9 && std::abs(res.a - 5.0) < 1e-9;
    return check(ok, "identity residual " + sci(res.final_identity_residual));
}

} // namespace

const std::vector<Suite>& verify_suites() {
    static const std::vector<Suite> suites = {
        {"side_pairing", side_pairing}, {"orbifold", orbifold},   {"circle_degree", circle_degree},
        {"factor_critical", factor_critical}, {"markov", markov}, {"conjugacy", conjugacy},
        {"bers_family", bers_family}, {"branches", branches},     {"partition", partition},
        {"deck", deck},               {"pingpong", pingpong},     {"normal_form", normal_form},
    };
    return suites;
}

} // namespace corrmate
