#include "lureid/lure_model.hpp"

#include "lureid/lti_checks.hpp"
#include "test_util.hpp"

using namespace lureid;
using Catch::Approx;

namespace {

// Independent scalar root finder (plain bisection to high precision).
double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
    REQUIRE(f(lo) * f(hi) <= 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) * f(lo) <= 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("built-in models satisfy the model class", "[lure_model]") {
    for (const char* name : {"fhn", "chua"}) {
        const LureModel model = builtin_model(name);
        CHECK_NOTHROW(validate_model_class(model));
        CHECK(model.g.relative_degree() == 1);
        CHECK(model.g.gain_at_zero() > 0.0);
    }
    CHECK_THROWS_AS(builtin_model("nosuch"), std::invalid_argument);
}

TEST_CASE("inverse static characteristic", "[lure_model]") {
    const LureModel fhn = builtin_model("fhn");
    CHECK(i_infinity(fhn, 0.0) == 0.0);
    CHECK(i_infinity(fhn, 1.0) == Approx(2.0 / 3.0).epsilon(1e-12));

    const LureModel chua = builtin_model("chua");
    CHECK(i_infinity(chua, 1.0) == Approx(0.7 - 4.0).epsilon(1e-12));
}

TEST_CASE("equilibrium solving", "[lure_model]") {
    const LureModel fhn = builtin_model("fhn");
    SECTION("zero reference gives the origin") {
        CHECK(solve_equilibrium(fhn, 1.5, 0.0) == Approx(0.0).margin(1e-12));
    }
    SECTION("FHN k=1.5 vref=2 matches the bisection oracle") {
        const double k = 1.5;
        auto f = [&](double v) { return v / 3.0 + v * v * v / 3.0 + k * v - k * 2.0; };
        const double want = bisect_root(f, 0.0, 2.0);
        const double got = solve_equilibrium(fhn, k, 2.0);
        CHECK(got == Approx(want).margin(1e-10));
        CHECK(std::abs(f(got)) < 1e-12);
    }
    SECTION("Chua k=5 vref=1 matches the bisection oracle") {
        const LureModel chua = builtin_model("chua");
        auto f = [&](double v) { return 0.7 * v + chua.h.eval(v) + 5.0 * (v - 1.0); };
        const double want = bisect_root(f, 0.0, 3.0);
        CHECK(solve_equilibrium(chua, 5.0, 1.0) == Approx(want).margin(1e-10));
    }
    SECTION("equilibrium identity i_inf(v) + k v = k v_ref") {
        const LureModel chua = builtin_model("chua");
        for (double v_ref : {-3.0, -0.7, 0.4, 2.2}) {
            const double v = solve_equilibrium(chua, 5.0, v_ref, 1e-13);
            CHECK(i_infinity(chua, v) + 5.0 * v == Approx(5.0 * v_ref).margin(1e-10));
        }
    }
    SECTION("non-monotone loops fail bracket expansion") {
        // Pure linear h with slope -2 and no stabilizing gain: the residual
        // keeps one sign on both sides of every bracket.
        const LureModel bad{RationalTF({1.0}, {1.0, 1.0}),
                            StaticNL(-2.0, {}, SectorBounds(-2.0, -2.0), {-1.0, 1.0}),
                            "bad"};
        CHECK_THROWS_WITH(solve_equilibrium(bad, 0.0, 1.0),
                          Catch::Matchers::ContainsSubstring("bracket"));
    }
    SECTION("equilibrium map is monotone in the reference") {
        double prev = -1e300;
        for (int i = 0; i <= 20; ++i) {
            const double v_ref = -3.0 + 6.0 * i / 20.0;
            const double v = solve_equilibrium(fhn, 1.5, v_ref);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("closed-loop transfer function", "[lure_model]") {
    const LureModel fhn = builtin_model("fhn");
    SECTION("k = 0 collapses to zero") {
        CHECK(closed_loop_tf(fhn.g, 0.0, 0.0).is_zero());
    }
    SECTION("FHN with a1=-1, k=1.5: polynomial-addition oracle") {
        const RationalTF gk = closed_loop_tf(fhn.g, -1.0, 1.5);
        REQUIRE(gk.num().size() == 2);
        REQUIRE(gk.den().size() == 3);
        CHECK(gk.num()[0] == Approx(30.0));
        CHECK(gk.num()[1] == Approx(22.5));
        CHECK(gk.den()[0] == Approx(1.0));
        CHECK(gk.den()[1] == Approx(0.75 + 0.5 * 20.0));
        CHECK(gk.den()[2] == Approx(20.0 + 0.5 * 15.0));
    }
    SECTION("closed loops are stable at the published gains") {
        CHECK(is_hurwitz(closed_loop_tf(fhn.g, -1.0, 1.5)));
        CHECK(is_hurwitz(closed_loop_tf(fhn.g, -1.0, 3.0)));
        const LureModel chua = builtin_model("chua");
        CHECK(is_hurwitz(closed_loop_tf(chua.g, -4.0, 5.0)));
        CHECK(is_hurwitz(closed_loop_tf(chua.g, -4.0, 8.0)));
    }
    SECTION("an insufficient gain is rejected") {
        CHECK_THROWS_WITH(closed_loop_tf(fhn.g, -1.0, 0.5),
                          Catch::Matchers::ContainsSubstring("unstable"));
    }
}

TEST_CASE("linear-term absorption", "[lure_model]") {
    const LureModel fhn = builtin_model("fhn");
    const RationalTF ga = absorb_linear_term(fhn.g, -1.0);
    CHECK(ga.num()[0] == Approx(20.0));
    CHECK(ga.num()[1] == Approx(15.0));
    CHECK(ga.den()[1] == Approx(0.75 - 20.0));
    CHECK(ga.den()[2] == Approx(20.0 - 15.0));
    // Feedback equivalence: G/(1+a1 G) evaluated directly.
    for (double omega : {0.3, 2.0, 11.0}) {
        const auto g = eval_freq(fhn.g, omega);
        const auto want = g / (1.0 + -1.0 * g);
        CHECK(std::abs(eval_freq(ga, omega) - want) < 1e-12 * std::abs(want));
    }
}
