#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "ruledlab/error.hpp"
#include "ruledlab/ruled.hpp"
#include "ruledlab/synthesis.hpp"
#include "ruledlab/transversal.hpp"
#include "support.hpp"

using namespace ruledlab;
using namespace ruledlab::transversal;
using ruledlab::test::dist;
using ruledlab::test::rel_diff;

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

synth::SampledSurface base(const std::string& k1, const std::string& k2, const std::string& theta,
                           double s1 = 1.0) {
    return synth::synthesize_surface(synth::IntrinsicData::from_strings(k1, k2, theta, 0.0, s1, 1e-3));
}

synth::SampledSurface base(double k1, double k2, double theta) { return base(num(k1), num(k2), num(theta)); }

TransversalSpec spec(Family f, const std::string& angle, Branch b = Branch::TimelikeRuling) {
    return {f, expr::ScalarFunction(angle), b};
}

// The base with k1 = 1, k2 = 0 and constant theta = t written out in closed form:
//   q = (cosh s, sinh s, 0), h = (sinh s, cosh s, 0), a = (0, 0, -1),
//   c = (cosh t sinh s, cosh t (cosh s - 1), -sinh t s).
// The transversal ruling is assembled from these expressions, so the strictional distance and the
// drall below come from symbolic derivatives of an explicit parametrization only.
ruled::ExplicitSurface hand_surface(double t, Family f, const std::string& ang, Branch b = Branch::TimelikeRuling) {
    const std::string ct = num(std::cosh(t)), st = num(std::sinh(t));
    std::array<std::string, 3> c{ct + "*sinh(s)", ct + "*(cosh(s) - 1)", "-" + st + "*s"};
    const std::string A = "(" + ang + ")";
    std::string mu = b == Branch::TimelikeRuling ? "cosh" + A : "sinh" + A;
    std::string eta = b == Branch::TimelikeRuling ? "sinh" + A : "cosh" + A;
    std::array<std::string, 3> q;
    switch (f) {
        case Family::Alpha:
            q = {mu + "*cosh(s) + " + eta + "*sinh(s)", mu + "*sinh(s) + " + eta + "*cosh(s)", "0"};
            break;
        case Family::Beta:
            q = {"cos" + A + "*sinh(s)", "cos" + A + "*cosh(s)", "-sin" + A};
            break;
        case Family::Gamma:
            q = {mu + "*cosh(s)", mu + "*sinh(s)", "-" + eta};
            break;
    }
    return ruled::ExplicitSurface::from_strings(c, q, 0.0, 1.0);
}

}  // namespace

TEST_CASE("transversal rulings") {
    auto surf = base(1, 0, 1);
    const auto& f0 = surf.frames().front();

    auto r = make_ruling(f0, spec(Family::Alpha, "1"));
    CHECK(dist(r.q, {std::cosh(1.0), std::sinh(1.0), 0}) <= 1e-12);
    CHECK(r.ell == -1);

    r = make_ruling(f0, spec(Family::Beta, "pi/4"));
    CHECK(dist(r.q, {0, std::sqrt(0.5), -std::sqrt(0.5)}) <= 1e-12);
    CHECK(r.ell == 1);

    r = make_ruling(f0, spec(Family::Gamma, "0.7", Branch::SpacelikeRuling));
    CHECK(r.ell == 1);
    r = make_ruling(f0, spec(Family::Gamma, "0.7"));
    CHECK(r.ell == -1);

    CHECK_THROWS_AS(make_ruling(f0, spec(Family::Alpha, "0")), Error);
    try {
        make_ruling(f0, spec(Family::Alpha, "0"));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TrivialRuling);
    }
    CHECK_THROWS_AS(make_ruling(f0, spec(Family::Beta, "pi/2")), Error);
}

TEST_CASE("ruling causal contract") {
    auto surf = base("1 + 0.3*s", "0.5*s", "0.2 + 0.4*s");
    for (auto [f, ang, b] : {std::tuple{Family::Alpha, "0.5 + s", Branch::TimelikeRuling},
                             std::tuple{Family::Alpha, "0.5 + s", Branch::SpacelikeRuling},
                             std::tuple{Family::Beta, "0.3 + s", Branch::TimelikeRuling},
                             std::tuple{Family::Gamma, "0.8 - 0.2*s", Branch::TimelikeRuling},
                             std::tuple{Family::Gamma, "0.8 - 0.2*s", Branch::SpacelikeRuling}}) {
        auto sp = spec(f, ang, b);
        for (const auto& fr : surf.frames()) {
            auto r = make_ruling(fr, sp);
            CHECK(std::abs(lorentz_dot(r.q, r.q) - r.ell) <= 1e-10);
        }
    }
}

TEST_CASE("alpha closed forms") {
    auto surf = base(1, 0, 0);
    auto sp = spec(Family::Alpha, "1");
    CHECK(strictional_distance_closed(surf, sp, 0.5) == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
    CHECK(std::abs(distribution_closed(surf, sp, 0.5)) <= 1e-14);
    auto rel = relation_via_d(surf, sp, 0.5);
    CHECK(std::abs(rel.lhs - rel.rhs) <= 1e-14);

    auto hand = hand_surface(0.0, Family::Alpha, "1");
    CHECK(ruled::striction(hand, 0.5).v0 == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
    for (const auto& t : sample_transversal(surf, sp)) {
        REQUIRE(t.v_oracle.has_value());
        CHECK(rel_diff(*t.v_oracle, *t.v_closed) <= 1e-5);
    }
}

TEST_CASE("beta closed forms against a hand oracle") {
    auto surf = base(1, 0, 1);
    auto sp = spec(Family::Beta, "pi/4");
    const double printed = std::sqrt(2.0) * std::cosh(1.0);
    CHECK(strictional_distance_closed(surf, sp, 0.5) == doctest::Approx(printed).epsilon(1e-12));
    CHECK(distribution_closed(surf, sp, 0.5) == doctest::Approx(-std::sinh(1.0)).epsilon(1e-12));
    auto rel = relation_via_d(surf, sp, 0.5);
    CHECK(rel.rhs == doctest::Approx(-std::sinh(1.0)).epsilon(1e-12));

    // v = -<c', q_b'>/<q_b', q_b'> with q_b' = cos(b) q gives -cosh(t)/cos(b)
    auto hand = hand_surface(1.0, Family::Beta, "pi/4");
    for (double s : {0.2, 0.5, 0.8}) {
        CHECK(ruled::striction(hand, s).v0 == doctest::Approx(-printed).epsilon(1e-12));
        CHECK(ruled::distribution_parameter(hand, s) == doctest::Approx(-std::sinh(1.0)).epsilon(1e-12));
    }

    auto samples = sample_transversal(surf, sp);
    for (std::size_t i = 0; i < samples.size(); i += 50) {
        const auto& t = samples[i];
        CHECK(rel_diff(*t.v_oracle, -printed) <= 1e-5);
        CHECK(rel_diff(*t.v_closed, -*t.v_oracle) <= 1e-5);
        CHECK(rel_diff(*t.d_oracle, *t.d_closed) <= 1e-5);
        CHECK_FALSE(t.issues.empty());
    }
}

TEST_CASE("gamma closed forms") {
    auto surf = base(1, 0, 0);
    auto sp = spec(Family::Gamma, "1", Branch::SpacelikeRuling);
    CHECK(std::abs(strictional_distance_closed(surf, sp, 0.5)) <= 1e-14);
    const double coth1 = std::cosh(1.0) / std::sinh(1.0);
    CHECK(distribution_closed(surf, sp, 0.5) == doctest::Approx(coth1).epsilon(1e-12));
    auto rel = relation_via_d(surf, sp, 0.5);
    CHECK(rel.rhs == doctest::Approx(coth1).epsilon(1e-12));

    auto hand = hand_surface(0.0, Family::Gamma, "1", Branch::SpacelikeRuling);
    CHECK(std::abs(ruled::striction(hand, 0.5).v0) <= 1e-12);
    CHECK(ruled::distribution_parameter(hand, 0.5) == doctest::Approx(coth1).epsilon(1e-12));

    for (double th : {0.0, 0.5, 1.0}) {
        auto s2 = base(1.5, 0.7, th);
        for (Branch b : {Branch::TimelikeRuling, Branch::SpacelikeRuling}) {
            auto g = spec(Family::Gamma, "0.6", b);
            for (const auto& t : sample_transversal(s2, g)) {
                CHECK(std::abs(*t.v_closed) <= 1e-14);
                CHECK(std::abs(*t.v_oracle) <= 1e-7);
            }
        }
    }
}

TEST_CASE("varying angle oracle matches the hand surface") {
    auto surf = base(1, 0, 0.5);
    for (auto [f, ang] : {std::pair{Family::Alpha, std::string("0.4 + 0.5*s")},
                          std::pair{Family::Beta, std::string("0.3 + 0.6*s")},
                          std::pair{Family::Gamma, std::string("0.9 - 0.4*s")}}) {
        CAPTURE(to_string(f));
        auto hand = hand_surface(0.5, f, ang);
        auto samples = sample_transversal(surf, spec(f, ang));
        for (std::size_t i = 100; i + 100 < samples.size(); i += 100) {
            const auto& t = samples[i];
            CHECK(std::abs(*t.v_oracle - ruled::striction(hand, t.s).v0) <= 1e-6);
            CHECK(std::abs(*t.d_oracle - ruled::distribution_parameter(hand, t.s)) <= 1e-6);
        }
    }
}

TEST_CASE("distribution parameter closed forms match the oracle") {
    for (double k1 : {0.5, 1.0, 2.0}) {
        for (double k2 : {0.5, 1.0, 2.0}) {
            for (double th : {0.0, 0.5, 1.0}) {
                auto surf = base(k1, k2, th);
                for (auto [f, ang, b] : {std::tuple{Family::Alpha, "0.5", Branch::TimelikeRuling},
                                         std::tuple{Family::Beta, "0.5", Branch::TimelikeRuling},
                                         std::tuple{Family::Gamma, "0.5", Branch::TimelikeRuling},
                                         std::tuple{Family::Gamma, "1", Branch::SpacelikeRuling}}) {
                    CAPTURE(k1);
                    CAPTURE(k2);
                    CAPTURE(th);
                    CAPTURE(to_string(f));
                    auto samples = sample_transversal(surf, spec(f, ang, b));
                    for (std::size_t i = 0; i < samples.size(); i += 100) {
                        const auto& t = samples[i];
                        if (!t.d_closed) continue;
                        CHECK(rel_diff(*t.d_closed, *t.d_oracle) <= 1e-5);
                        CHECK(rel_diff(*t.d_closed, *t.d_relation) <= 1e-8);
                    }
                }
            }
        }
    }
}

TEST_CASE("explicit transversal grid") {
    auto surf = base(1, 0.5, 0.5);
    auto g = to_explicit(surf, spec(Family::Beta, "0.4 + s"), -1, 1, 5);
    CHECK(g.ns == surf.size());
    CHECK(g.nv == 5);
    REQUIRE(g.grid.size() == g.ns * g.nv);
    for (std::size_t i = 0; i < g.ns; i += 10) {
        CHECK(g.grid[i * 5 + 2] == surf.frames()[i].c);
        CHECK(g.ell[i] == 1);
    }
}

TEST_CASE("coincidence conditions") {
    const double th = std::atanh(0.5);
    SUBCASE("alpha") {
        auto rep = coincidence_condition(base(1, 2, th), spec(Family::Alpha, "0.5"), 1e-7);
        CHECK(rep.find("condition_residual")->max_abs <= 1e-12);
        CHECK(rep.find("oracle_strictional_distance")->max_abs <= 1e-8);
        CHECK(rep.consistent);
    }
    SUBCASE("beta") {
        auto rep = coincidence_condition(base(1, 2, th), spec(Family::Beta, "0.5"), 1e-7);
        CHECK(rep.find("condition_residual")->max_abs <= 1e-12);
        CHECK(rep.find("oracle_strictional_distance")->holds);
        CHECK(rep.consistent);
    }
    SUBCASE("gamma with constant angle") {
        for (double t : {0.0, 0.5, 1.0}) {
            auto rep = coincidence_condition(base(1, 0.5, t), spec(Family::Gamma, "0.7"), 1e-7);
            CHECK(rep.find("oracle_strictional_distance")->holds);
            CHECK(rep.find("angle_constant")->holds);
            CHECK(rep.consistent);
        }
    }
    SUBCASE("violated") {
        auto rep = coincidence_condition(base(1, 2, th + 0.1), spec(Family::Alpha, "0.5"), 1e-7);
        CHECK_FALSE(rep.find("condition_residual")->holds);
        CHECK(rep.find("oracle_strictional_distance")->min_abs >= 1e-3);
        CHECK(rep.consistent);
    }
}

TEST_CASE("developability conditions") {
    SUBCASE("beta numerator and oracle agree on a grid") {
        for (double k2 : {0.5, 1.0}) {
            for (double th : {0.0, 0.5}) {
                for (const char* b : {"0.4", "0.4 + 0.3*s"}) {
                    auto rep = developability_condition(base(1, k2, th), spec(Family::Beta, b), 1e-6);
                    CHECK(rep.consistent);
                    CHECK(rep.find("restated_condition")->holds == rep.find("oracle_distribution")->holds);
                }
            }
        }
    }
    SUBCASE("beta tuned to be developable") {
        // tanh t = B/(k1 cos^2 b) with k1 = 1, k2 = 0.25, b = 0.5
        const double mu2 = std::cos(0.5) * std::cos(0.5);
        const double th = std::atanh(0.25 / mu2);
        auto rep = developability_condition(base(1, 0.25, th), spec(Family::Beta, "0.5"), 1e-6);
        CHECK(rep.find("oracle_distribution")->holds);
        CHECK(rep.find("numerator_residual")->holds);
        CHECK(rep.consistent);
        CHECK(rep.discrepancies.empty());
    }
    SUBCASE("alpha restated condition is flagged") {
        // numerator zero: tanh t = eta^2 k2 / (l (a' + k1)) with l = +1 on the spacelike branch
        const double eta2 = std::cosh(0.5) * std::cosh(0.5);
        const double k1 = 4.0, k2 = 1.0;
        const double th = std::atanh(eta2 * k2 / k1);
        auto rep = developability_condition(base(k1, k2, th), spec(Family::Alpha, "0.5", Branch::SpacelikeRuling),
                                            1e-6);
        CHECK(rep.find("oracle_distribution")->holds);
        CHECK(rep.find("numerator_residual")->holds);
        CHECK_FALSE(rep.find("restated_condition")->holds);
        CHECK_FALSE(rep.discrepancies.empty());
    }
    SUBCASE("gamma factorization") {
        // G = mu k1 - eta k2 vanishes; a moving angle keeps the ruling from being constant
        auto rep = developability_condition(base("1", "1/tanh(0.5 + 0.3*s)", "0.3"), spec(Family::Gamma, "0.5 + 0.3*s"),
                                            1e-6);
        CHECK(rep.find("oracle_distribution")->holds);
        CHECK(rep.find("numerator_residual")->holds);
        CHECK(rep.find("restated_condition")->holds);
    }
}

TEST_CASE("corollaries on developable bases") {
    SUBCASE("alpha on a conoid") {
        auto rep = corollary_checks(base(1, 0, 0), spec(Family::Alpha, "0.3 + s"), 1e-7);
        CHECK(rep.find("oracle_distribution")->holds);
        CHECK(rep.find("corollary_condition")->holds);
        CHECK(rep.consistent);
        auto off = corollary_checks(base(1, 0.5, 0), spec(Family::Alpha, "0.5"), 1e-7);
        CHECK(off.find("oracle_distribution")->min_abs >= 1e-3);
        CHECK(off.consistent);
    }
    SUBCASE("beta with b' = -k2") {
        auto rep = corollary_checks(base(1, 1, 0), spec(Family::Beta, "1.2 - s"), 1e-7);
        CHECK(rep.find("oracle_distribution")->max_abs <= 1e-7);
        CHECK(rep.consistent);
        auto off = corollary_checks(base(1, 1, 0), spec(Family::Beta, "0.5"), 1e-7);
        CHECK_FALSE(off.find("oracle_distribution")->holds);
        CHECK(off.consistent);
    }
    SUBCASE("gamma") {
        auto off = corollary_checks(base(1, 1, 0), spec(Family::Gamma, "0.5"), 1e-7);
        CHECK_FALSE(off.find("oracle_distribution")->holds);
        CHECK(off.consistent);
        auto on = corollary_checks(base("1", "1/tanh(0.5 + 0.3*s)", "0"), spec(Family::Gamma, "0.5 + 0.3*s"), 1e-7);
        CHECK(on.find("oracle_distribution")->holds);
        CHECK(on.consistent);
    }
    SUBCASE("skew base is rejected") {
        try {
            corollary_checks(base(1, 0, 0.5), spec(Family::Alpha, "0.5"), 1e-7);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::BaseNotDevelopable);
        }
    }
}

TEST_CASE("parameter families under coincidence") {
    // theta constant, coincidence maintained: a' = x k2 - k1 with x = tanh(theta)
    const double th = 0.5, k1 = 1.0, k2 = 3.0;
    const double slope = std::tanh(th) * k2 - k1;
    auto rep = coincidence_condition(base(k1, k2, th), spec(Family::Alpha, "1 + " + num(slope) + "*s"), 1e-7);
    CHECK(rep.find("condition_residual")->holds);
    CHECK(rep.find("oracle_strictional_distance")->holds);

    // k1 = y (b' + k2) with y = tanh(theta)
    const double bslope = k1 / std::tanh(th) - k2;
    auto rb = coincidence_condition(base(k1, k2, th), spec(Family::Beta, "1.2 + " + num(bslope) + "*s"), 1e-7);
    CHECK(rb.find("condition_residual")->holds);
    CHECK(rb.find("oracle_strictional_distance")->holds);
}
