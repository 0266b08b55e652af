// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include "corrmate/bers.hpp"
#include "corrmate/circle.hpp"
#include "corrmate/correspondence.hpp"
#include "corrmate/errors.hpp"
#include "corrmate/fuchsian.hpp"
#include "corrmate/normal_form.hpp"
#include "corrmate/render.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace corrmate;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = limit_s <= 0.0 || s < limit_s;
    const bool ok = o.ok && in_time;
    if (!ok) ++failures;
    std::printf("%s %2d %s: %s; %.3f s", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), s);
    if (limit_s > 0.0) std::printf(" (limit %.0f s)", limit_s);
    std::printf("\n");
    std::fflush(stdout);
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

double poly_dist(const Poly& a, const Poly& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k)
        m = std::max(m, std::abs((k < a.size() ? a[k] : Complex(0.0)) - (k < b.size() ? b[k] : Complex(0.0))));
    return m;
}

const std::vector<std::pair<int, int>> kLiftGrid = {{1, 4}, {1, 5}, {1, 6}, {3, 1}, {4, 1}, {4, 3}, {2, 3}};

Complex rnd(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng)};
}

} // namespace

int main() {
    criterion(1, "normal form of the cubic", 1.0, [] {
        const RationalMap R = build_family_c({3, 1, {1.0}});
        // (z + 1/2)^3 / z^2 expanded independently
        const RationalMap expected(poly_pow({0.5, 1.0}, 3), {0.0, 0.0, 1.0});
        const double map_err = coefficient_distance(R, expected);
        const auto res = bp_normalize(R, 3);
        const double cubic = res.R1.is_polynomial() ? poly_dist(res.R1.num(), {0.0, -3.0, 0.0, 1.0}) : 1e300;
        const double a_err = std::abs(res.a - 5.0);
        const bool ok = map_err < 1e-12 && cubic < 1e-9 && a_err < 1e-9 && res.final_identity_residual < 1e-8;
        return Outcome{ok, "map " + sci(map_err) + ", R1 vs u^3-3u " + sci(cubic) + ", |a-5| " + sci(a_err) + ", identity residual " +
                               sci(res.final_identity_residual)};
    });

    criterion(2, "side-pairing algebra", 5.0, [] {
        double worst = 0.0;
        int groups = 0;
        for (int n = 1; n <= 5; ++n)
            for (int p = 1; p <= 8; ++p) {
                if (n * p < 3) continue;
                ++groups;
                const GroupData g = build_group(n, p);
                for (int s = 1; s <= p; ++s) {
                    worst = std::max(worst, (g.generator(1, s) * g.generator(1, p + 1 - s)).distance(MobiusMap::identity()));
                    for (int r = 1; r <= n; ++r) {
                        const MobiusMap rot = MobiusMap::rotation(std::polar(1.0, 2.0 * kPi * (r - 1) / n));
                        worst = std::max(worst, g.generator(r, s).distance(rot * g.generator(1, s) * rot.inverse()));
                    }
                }
            }
        return Outcome{worst < 1e-12, std::to_string(groups) + " groups, max residual " + sci(worst)};
    });

    criterion(3, "covering degree np-1", 10.0, [] {
        bool ok = true;
        std::string d;
        for (auto [n, p] : kLiftGrid) {
            const auto rep = circle_lift(FactorCircleMap(build_group(n, p)));
            ok = ok && rep.degree == n * p - 1 && rep.monotone;
            d += "(" + std::to_string(n) + "," + std::to_string(p) + ")=" + std::to_string(rep.degree) + " ";
        }
        d.pop_back();
        return Outcome{ok, d};
    });

    criterion(4, "critical audit of the factor maps", 0.0, [] {
        bool ok = true;
        std::string d;
        for (auto [n, p] : kLiftGrid) {
            const FactorCircleMap F(build_group(n, p));
            const auto cps = critical_points_fbs(F);
            bool here = static_cast<int>(cps.size()) == (n >= 2 ? p : 0);
            for (const auto& c : cps) {
                here = here && c.multiplicity == n - 1 && chordal_distance(c.value, SpherePoint(0.0)) < 1e-12;
                // local degree n from |A(c + h)| ~ |h|^n, in the first direction where A is defined
                bool measured = false;
                for (int k = 0; k < 8 && !measured; ++k) {
                    const Complex dir = std::polar(1.0, 0.3 + k * kPi / 4);
                    try {
                        const double a1 = std::abs(F(c.point.value() + 1e-3 * dir).value());
                        const double a2 = std::abs(F(c.point.value() + 1e-4 * dir).value());
                        here = here && std::abs(std::log10(a1 / a2) - n) < 0.01 * n;
                        measured = true;
                    } catch (const DomainError&) {
                    }
                }
                here = here && measured;
            }
            ok = ok && here;
            d += "(" + std::to_string(n) + "," + std::to_string(p) + "):" + std::to_string(cps.size()) + " ";
        }
        d.pop_back();
        return Outcome{ok, "critical points " + d};
    });

    criterion(5, "conjugacy defect at depth 40", 30.0, [] {
        bool ok = true;
        std::string d;
        for (auto [n, p] : std::vector<std::pair<int, int>>{{1, 4}, {3, 1}}) {
            const FactorCircleMap F(build_group(n, p));
            const CircleConjugacy h(F);
            const std::int64_t N = 4096, deg = n * p - 1;
            double worst = 0.0, prev = -1.0;
            bool monotone = true;
            for (std::int64_t i = 0; i < N; ++i) {
                const SpherePoint a = h(i, N, 40);
                worst = std::max(worst, chordal_distance(F(a), h((i * deg) % N, N, 40)));
                const double t = turns_of(a.value());
                if (i > 0 && t <= prev) monotone = false;
                prev = t;
            }
            ok = ok && worst < 1e-6 && monotone;
            d += "(" + std::to_string(n) + "," + std::to_string(p) + ") " + sci(worst) + (monotone ? " monotone" : " NOT monotone") + "; ";
        }
        d.resize(d.size() - 2);
        return Outcome{ok, d};
    });

    criterion(6, "Bers-family structure", 0.0, [] {
        std::mt19937_64 rng(6);
        struct Case {
            std::string name;
            int n, p, free;
            std::function<RationalMap(const std::vector<Complex>&)> build;
        };
        std::vector<Case> cases;
        for (int q : {2, 3, 4})
            cases.push_back({"A q=" + std::to_string(q), 1, 2 * q, q - 2, [q](const std::vector<Complex>& f) { return build_family_a({q, f}); }});
        for (int q : {2, 3})
            cases.push_back({"B q=" + std::to_string(q), 1, 2 * q + 1, q - 1, [q](const std::vector<Complex>& f) { return build_family_b({q, f}); }});
        // critical data {1} u {-1 if p even}: no free pairs for these (n, p)
        cases.push_back({"C (3,1)", 3, 1, 0, [](const std::vector<Complex>&) { return build_family_c({3, 1, {1.0}}); }});
        cases.push_back({"C (3,2)", 3, 2, 0, [](const std::vector<Complex>&) { return build_family_c({3, 2, {1.0, -1.0}}); }});
        cases.push_back({"C (4,1)", 4, 1, 0, [](const std::vector<Complex>&) { return build_family_c({4, 1, {1.0}}); }});
        bool ok = true;
        double worst_sym = 0.0;
        std::string bad;
        for (const auto& c : cases) {
            std::vector<Complex> f;
            for (int i = 0; i < c.free; ++i) f.push_back(rnd(rng, 0.1));
            const RationalMap R = c.build(f);
            const Poly Q = critical_polynomial(R, c.n, c.p);
            const Poly rev = poly_reverse(Q, c.p);
            const double sym = std::min(poly_dist(rev, Q), poly_dist(rev, poly_scale(Q, -1.0)));
            worst_sym = std::max(worst_sym, sym);
            bool here = sym < 1e-10 && std::abs(poly_eval(Q, 1.0)) < 1e-10;
            if (c.p % 2 == 0) here = here && std::abs(poly_eval(Q, -1.0)) < 1e-10;
            // pole of order exactly np-1 at 0: den = z^(np-1) and num(0) != 0
            here = here && R.den_degree() == c.n * c.p - 1 && R.num()[0] != Complex(0.0);
            for (int k = 0; k + 1 < static_cast<int>(R.den().size()); ++k) here = here && R.den()[k] == Complex(0.0);
            // every free parameter moves the map, and their number is the Teichmuller dimension
            for (int i = 0; i < c.free; ++i) {
                auto g = f;
                g[i] += 1e-3;
                here = here && coefficient_distance(c.build(g), R) > 1e-6;
            }
            here = here && c.free == teich_dimension(c.n, c.p);
            here = here && validate_family(R, c.n, c.p).passed();
            if (!here) bad += " " + c.name;
            ok = ok && here;
        }
        return Outcome{ok, std::to_string(cases.size()) + " maps, max inversion residual " + sci(worst_sym) + (bad.empty() ? "" : ", failed:" + bad)};
    });

    criterion(7, "correspondence branch contracts", 0.0, [] {
        std::mt19937_64 rng(7);
        const std::vector<std::pair<std::string, RationalMap>> maps = {
            {"A2", build_family_a({2, {}})},       {"A3", build_family_a({3, {rnd(rng, 0.1)}})},
            {"B2", build_family_b({2, {rnd(rng, 0.1)}})}, {"C31", build_family_c({3, 1, {1.0}})},
            {"C32", build_family_c({3, 2, {1.0, -1.0}})}, {"C41", build_family_c({4, 1, {1.0}})}};
        double trip = 0.0, dual = 0.0;
        bool degree_ok = true;
        for (const auto& [name, R] : maps) {
            const Correspondence C(R);
            for (int i = 0; i < 100; ++i) {
                const SpherePoint z(rnd(rng, 2.0));
                const auto fw = flatten(C.forward(z));
                const auto bw = flatten(C.backward(z));
                degree_ok = degree_ok && static_cast<int>(fw.size()) == C.d() && static_cast<int>(bw.size()) == C.d();
                for (const auto& w : fw) trip = std::max(trip, distance_to_set(z, flatten(C.backward(w))));
                std::vector<SpherePoint> mirrored;
                for (const auto& x : flatten(C.forward(eta(z)))) mirrored.push_back(eta(x));
                for (const auto& x : bw) dual = std::max(dual, distance_to_set(x, mirrored));
                for (const auto& x : mirrored) dual = std::max(dual, distance_to_set(x, bw));
            }
        }
        return Outcome{degree_ok && trip < 1e-7 && dual < 1e-8, std::to_string(maps.size()) + " maps x 100 points, bidegree " +
                                                                    (degree_ok ? "ok" : "WRONG") + ", round trip " + sci(trip) +
                                                                    ", duality " + sci(dual)};
    });

    criterion(8, "deck transformation and ping-pong for (3,1)", 0.0, [] {
        const RationalMap R = build_family_c({3, 1, {1.0}});
        const DeckTransform tau(R, 3, 1);
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        // area-uniform in the disk of 0.9 x the trust radius, so the images stay in the chart
        std::vector<Complex> samples;
        for (int i = 0; i < 100; ++i)
            samples.push_back(tau.centers()[0] + std::polar(0.9 * tau.trust_radius() * std::sqrt(u(rng)), 2 * kPi * u(rng)));
        double cyc = 0.0;
        for (const auto& z : samples) cyc = std::max(cyc, std::abs(tau.apply(tau.apply(tau.apply(z))) - z));
        const auto rep = pingpong_check(R, 3, 1, samples, 6);
        const bool ok = cyc < 1e-6 && rep.eta_relation < 1e-8 && rep.tau_relation < 1e-8 && rep.min_displacement > 1e-4 &&
                        rep.violations.empty();
        return Outcome{ok, "tau^3 " + sci(cyc) + ", eta^2 " + sci(rep.eta_relation) + ", tau^3 on paths " + sci(rep.tau_relation) + ", " +
                               std::to_string(rep.words) + " reduced words, min displacement " + sci(rep.min_displacement) +
                               " (" + rep.worst_word + ")"};
    });

    criterion(9, "family A q=2 raster symmetry at 512x512", 0.0, [] {
        const Correspondence C(build_family_a({2, {}}));
        const Classifier K(C, DomainSpec::unit_circle(), 4);
        RasterJob job;
        job.width = job.height = 512;
        const auto raster = render_classification(K, job);
        const double agree = eta_pullback_agreement(raster, job);
        const auto density = cloud_density(job, grand_orbit_cloud(C, 200000, 1));
        const double lit = cloud_eta_lighting(density, job);
        return Outcome{agree >= 0.98 && lit >= 0.98, "label agreement " + std::to_string(agree) + " (" +
                                                         std::to_string(raster.count(Label::Undecided)) + " undecided), cloud lighting " +
                                                         std::to_string(lit)};
    });

    criterion(10, "orbifold_to_np exact", 0.0, [] {
        int checked = 0, rejected = 0;
        bool ok = true;
        for (int d1 = 1; d1 <= 6; ++d1)
            for (int d2 = 0; d2 <= 1; ++d2)
                for (int d3 = 0; d3 <= 1; ++d3)
                    for (int nu = 3; nu <= 6; ++nu) {
                        if (d3 == 0 && nu > 3) continue; // nu is ignored without cone points of order nu
                        const int n = d3 == 1 ? nu : 1;
                        const int p = d2 == 1 ? 2 * d1 - 1 : 2 * d1 - 2;
                        if (p < 1 || n * p < 3) {
                            bool threw = false;
                            try {
                                orbifold_to_np(d1, d2, d3, nu);
                            } catch (const std::invalid_argument&) {
                                threw = true;
                            }
                            ok = ok && threw;
                            ++rejected;
                            continue;
                        }
                        const auto g = orbifold_to_np(d1, d2, d3, nu);
                        ok = ok && g == GroupParameters{n, p, n * p - 1};
                        // the extended quotient of the resulting group has the input signature
                        const auto sig = quotient_signature(g.n, g.p, true);
                        ok = ok && sig.punctures == d1 && sig.order2_points == d2 && sig.orderN_points == d3 &&
                             (d3 == 0 || sig.order_value == nu);
                        ++checked;
                    }
        return Outcome{ok, std::to_string(checked) + " signatures mapped and round-tripped, " + std::to_string(rejected) +
                               " non-hyperbolic rejected"};
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
