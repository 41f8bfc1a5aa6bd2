#include "lureid/lti_checks.hpp"

#include "lureid/lure_model.hpp"
#include "test_util.hpp"

using namespace lureid;
using Catch::Approx;

TEST_CASE("positive-real check", "[lti_checks]") {
    SECTION("FHN block: Re[G] * |D|^2 == 300 identically") {
        const RationalTF fhn({20.0, 15.0}, {1.0, 0.75, 20.0});
        // Dense independent oracle over the grid.
        for (double omega : {1e-3, 0.1, 1.0, 4.47, 50.0, 1e4}) {
            const std::complex<double> d = poly::eval(fhn.den(), {0.0, omega});
            const double re = eval_freq(fhn, omega).real();
            CHECK(re * std::norm(d) == Approx(300.0).epsilon(1e-9));
        }
        const auto rep = check_positive_real(fhn);
        CHECK(rep.ok);
        CHECK(rep.min_re >= -1e-9);
        CHECK(rep.dc_gain == Approx(0.75));
    }
    SECTION("first-order lag approaches zero from above") {
        const auto rep = check_positive_real(RationalTF({1.0}, {1.0, 1.0}));
        CHECK(rep.ok);
        CHECK(rep.min_re >= 0.0);
        CHECK(rep.min_re < 1e-6);
    }
    SECTION("non-minimum-phase example goes negative") {
        const RationalTF tf({-1.0, 1.0}, {1.0, 1.0, 1.0});
        // Oracle: Re[N conj(D)] = 1 - 2 w^2 < 0 for w^2 > 1/2.
        const double re = eval_freq(tf, 10.0).real();
        CHECK(re < 0.0);
        const auto rep = check_positive_real(tf);
        CHECK_FALSE(rep.ok);
        CHECK(rep.min_re < -1e-4);
    }
    SECTION("Chua block: dip at omega = sqrt(3.5) stays nonnegative") {
        const LureModel chua = builtin_model("chua");
        const auto rep = check_positive_real(chua.g);
        CHECK(rep.ok);
        CHECK(rep.omega_at_min == Approx(std::sqrt(3.5)).epsilon(1e-3));
        CHECK(std::abs(rep.min_re) < 1e-10);
    }
    SECTION("non-Hurwitz precondition") {
        CHECK_THROWS_WITH(check_positive_real(RationalTF({1.0}, {1.0, -1.0})),
                          Catch::Matchers::ContainsSubstring("Hurwitz"));
    }
}

TEST_CASE("circle-criterion disk check", "[lti_checks]") {
    const SectorBounds sym(-1.0, 1.0);
    SECTION("small gain inside the unit disk") {
        const auto rep = check_circle_condition(RationalTF({0.5}, {1.0, 1.0}), sym);
        CHECK(rep.ok);
        CHECK(rep.center == Approx(0.0));
        CHECK(rep.radius == Approx(1.0));
        CHECK(rep.worst_margin > 0.0);
        CHECK(rep.worst_margin == Approx(0.5).margin(1e-6));
    }
    SECTION("dc gain 2 leaves the disk at omega = 0") {
        const auto rep = check_circle_condition(RationalTF({2.0}, {1.0, 1.0}), sym);
        CHECK_FALSE(rep.ok);
        CHECK(rep.worst_margin == Approx(-1.0).margin(1e-6));
        CHECK(rep.omega_at_worst == Approx(0.0).margin(1e-3));
    }
    SECTION("FHN block fails for every rho2 > 0") {
        const RationalTF fhn({20.0, 15.0}, {1.0, 0.75, 20.0});
        for (double rho2 : {0.1, 1.0, 10.0}) {
            const auto rep = check_circle_condition(fhn, SectorBounds(-1.0, rho2));
            CHECK_FALSE(rep.ok);
        }
    }
    SECTION("wrong-condition error when rho1 >= 0") {
        CHECK_THROWS_WITH(
            check_circle_condition(RationalTF({0.5}, {1.0, 1.0}), SectorBounds(0.0, 1.0)),
            Catch::Matchers::ContainsSubstring("check_positive_real"));
    }
}

TEST_CASE("impulse response L1 norm", "[lti_checks]") {
    SECTION("first-order references") {
        CHECK(impulse_l1_norm(RationalTF({1.0}, {1.0, 1.0})) == Approx(1.0).margin(1e-4));
        CHECK(impulse_l1_norm(RationalTF({1.0}, {1.0, 2.0})) == Approx(0.5).margin(1e-4));
    }
    SECTION("FHN: fine-step self-consistency") {
        const RationalTF fhn({20.0, 15.0}, {1.0, 0.75, 20.0});
        const double coarse = impulse_l1_norm(fhn, 0.0, 1e-3);
        const double fine = impulse_l1_norm(fhn, 0.0, 1e-4);
        CHECK(std::abs(coarse - fine) <= 1e-3 * fine);
    }
    SECTION("scaling homogeneity") {
        CounterRng rng(3);
        const RationalTF tf = testutil::random_stable_tf(rng, 2, 0);
        const double alpha = -2.5;
        const RationalTF scaled(poly::scale(tf.num(), alpha), tf.den());
        const double a = impulse_l1_norm(scaled);
        const double b = std::abs(alpha) * impulse_l1_norm(tf);
        CHECK(a == Approx(b).epsilon(1e-6));
    }
    SECTION("divergence error on unstable input") {
        CHECK_THROWS_WITH(impulse_l1_norm(RationalTF({1.0}, {1.0, -0.5})),
                          Catch::Matchers::ContainsSubstring("diverges"));
    }
}
