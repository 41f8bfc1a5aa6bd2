#include "lureid/rational_tf.hpp"

#include "test_util.hpp"

using namespace lureid;
using Catch::Approx;

namespace {

// Independent oracle: textbook complex polynomial evaluation, no Horner.
std::complex<double> direct_poly_eval(const std::vector<double>& coeffs,
                                      std::complex<double> s) {
    std::complex<double> acc{0.0, 0.0};
    const int n = static_cast<int>(coeffs.size()) - 1;
    for (int i = 0; i <= n; ++i)
        acc += coeffs[static_cast<std::size_t>(i)] * std::pow(s, n - i);
    return acc;
}

}  // namespace

TEST_CASE("transfer function normalization", "[rational_tf]") {
    const RationalTF tf({2.0, 4.0}, {2.0, 1.0, 3.0});
    CHECK(tf.den()[0] == 1.0);
    CHECK(tf.num()[0] == Approx(1.0));
    CHECK(tf.num()[1] == Approx(2.0));
    CHECK(tf.den()[1] == Approx(0.5));
    CHECK(tf.relative_degree() == 1);

    CHECK_THROWS_AS(RationalTF({1.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("eval_freq on the FHN passive block", "[rational_tf]") {
    const RationalTF fhn({20.0, 15.0}, {1.0, 0.75, 20.0});
    CHECK(eval_freq(fhn, 0.0).real() == Approx(0.75).margin(1e-15));
    CHECK(eval_freq(fhn, 0.0).imag() == Approx(0.0).margin(1e-15));

    const std::complex<double> got = eval_freq(fhn, 1.0);
    const std::complex<double> want =
        direct_poly_eval({20.0, 15.0}, {0.0, 1.0}) / direct_poly_eval({1.0, 0.75, 20.0}, {0.0, 1.0});
    CHECK(std::abs(got - want) < 1e-12);
}

TEST_CASE("eval_freq zero numerator and degenerate denominator", "[rational_tf]") {
    const RationalTF zero({0.0}, {1.0, 2.0, 0.5});
    CHECK(eval_freq(zero, 0.37).real() == 0.0);
    CHECK(eval_freq(zero, 123.0).imag() == 0.0);

    const RationalTF marginal({1.0}, {1.0, 0.0, 1.0});  // poles at +-j
    CHECK_THROWS_WITH(eval_freq(marginal, 1.0),
                      Catch::Matchers::ContainsSubstring("singular"));
}

TEST_CASE("conjugate symmetry of real-coefficient responses", "[rational_tf]") {
    CounterRng rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        const RationalTF tf = testutil::random_stable_tf(rng, 3, 1);
        const double omega = 0.01 + 50.0 * rng.next_double();
        const auto plus = eval_freq(tf, omega);
        const auto minus = eval_freq(tf, -omega);
        CHECK(std::abs(minus - std::conj(plus)) < 1e-12 * (1.0 + std::abs(plus)));
    }
}

TEST_CASE("hurwitz checks", "[rational_tf]") {
    const RationalTF fhn({20.0, 15.0}, {1.0, 0.75, 20.0});
    CHECK(is_hurwitz(fhn));
    // Roots -0.375 +- j sqrt(20 - 0.140625).
    const auto poles = fhn.poles();
    REQUIRE(poles.size() == 2);
    CHECK(poles[0].real() == Approx(-0.375).epsilon(1e-10));
    CHECK(std::abs(poles[0].imag()) == Approx(std::sqrt(20.0 - 0.140625)).epsilon(1e-10));

    CHECK_FALSE(is_hurwitz(RationalTF({1.0}, {1.0, -1.0})));  // pole at +1

    // Chua passive block; independent Routh-Hurwitz oracle for the monic
    // cubic s^3 + a2 s^2 + a1 s + a0: positive coefficients and a2*a1 > a0.
    const double l = 1.0 / 7.0, c1 = 0.1, c2 = 2.0, r = 0.7;
    const RationalTF chua({l * c2, l * r, 1.0}, {l * c1 * c2, l * r * (c1 + c2), c1, r});
    const double a2 = chua.den()[1], a1 = chua.den()[2], a0 = chua.den()[3];
    REQUIRE(a2 > 0.0);
    REQUIRE(a1 > 0.0);
    REQUIRE(a0 > 0.0);
    REQUIRE(a2 * a1 > a0);
    CHECK(is_hurwitz(chua));
}

TEST_CASE("slowest decay rate", "[rational_tf]") {
    CHECK(slowest_decay_rate(RationalTF({1.0}, {1.0, 3.0})) == Approx(3.0));
    CHECK_THROWS(slowest_decay_rate(RationalTF({1.0}, {1.0, -2.0})));
}
