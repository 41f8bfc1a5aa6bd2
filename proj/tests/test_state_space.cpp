#include "lureid/state_space.hpp"

#include "lureid/lure_model.hpp"
#include "test_util.hpp"

using namespace lureid;
using Catch::Approx;

TEST_CASE("controllable canonical form of the FHN block", "[state_space]") {
    const RationalTF fhn({20.0, 15.0}, {1.0, 0.75, 20.0});
    const StateSpace ss = to_controllable_canonical(fhn);
    REQUIRE(ss.order() == 2);
    CHECK(ss.A(0, 0) == Approx(-0.75));
    CHECK(ss.A(0, 1) == Approx(-20.0));
    CHECK(ss.A(1, 0) == Approx(1.0));
    CHECK(ss.A(1, 1) == Approx(0.0));
    CHECK(ss.B(0) == Approx(1.0));
    CHECK(ss.B(1) == Approx(0.0));
    CHECK(ss.C(0) == Approx(20.0));
    CHECK(ss.C(1) == Approx(15.0));
    CHECK(ss.D == 0.0);
}

TEST_CASE("transfer_function inverts the realizations", "[state_space]") {
    CounterRng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const RationalTF tf = testutil::random_stable_tf(rng, 2 + (trial % 3), trial % 2);
        const RationalTF back = transfer_function(to_controllable_canonical(tf));
        CHECK(testutil::tf_coeff_error(back, tf) < 1e-9);
    }
}

TEST_CASE("modal canonical blocks", "[state_space]") {
    SECTION("single real pole") {
        const StateSpace ss = to_modal_canonical(RationalTF({1.0}, {1.0, 1.0}));
        REQUIRE(ss.order() == 1);
        CHECK(ss.A(0, 0) == Approx(-1.0));
        CHECK(ss.B(0) == Approx(1.0));
        CHECK(ss.C(0) == Approx(1.0));
    }
    SECTION("complex pair at -1 +- 2j") {
        const StateSpace ss = to_modal_canonical(RationalTF({1.0}, {1.0, 2.0, 5.0}));
        REQUIRE(ss.order() == 2);
        CHECK(ss.A(0, 0) == Approx(-1.0));
        CHECK(std::abs(ss.A(0, 1)) == Approx(2.0));
        CHECK(ss.A(1, 0) == Approx(-ss.A(0, 1)));
        CHECK(ss.A(1, 1) == Approx(-1.0));
        for (double omega : {0.0, 0.7, 2.0, 9.3}) {
            const auto got = eval_freq(ss, omega);
            const auto want = eval_freq(RationalTF({1.0}, {1.0, 2.0, 5.0}), omega);
            CHECK(std::abs(got - want) <= 1e-8 * std::abs(want));
        }
    }
    SECTION("repeated poles rejected") {
        CHECK_THROWS_WITH(to_modal_canonical(RationalTF({1.0}, {1.0, 2.0, 1.0})),
                          Catch::Matchers::ContainsSubstring("repeated poles"));
    }
}

TEST_CASE("modal and controllable forms agree at random probes", "[state_space]") {
    CounterRng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const RationalTF tf = testutil::random_stable_tf(rng, 3, 1);
        const StateSpace modal = to_modal_canonical(tf);
        const StateSpace cc = to_controllable_canonical(tf);
        for (int p = 0; p < 10; ++p) {
            const double omega = 0.01 + 30.0 * rng.next_double();
            const auto a = eval_freq(modal, omega);
            const auto b = eval_freq(cc, omega);
            CHECK(std::abs(a - b) <= 1e-8 * (std::abs(b) + 1e-12));
        }
    }
}

TEST_CASE("modal form of the lumped Chua block", "[state_space]") {
    // The attractor comparison realizes G_a = G/(1 + a1 G) in modal form.
    const LureModel chua = builtin_model("chua");
    const RationalTF g_a = absorb_linear_term(chua.g, chua.h.linear_coeff());
    const StateSpace modal = to_modal_canonical(g_a);
    REQUIRE(modal.order() == 3);

    // Eigen-oracle: the modal diagonal must match the companion eigenvalues
    // (one unstable real mode and a lightly damped stable pair).
    const auto poles = g_a.poles();
    double real_pole = 0.0;
    std::complex<double> pair{0.0, 0.0};
    for (auto p : poles) {
        if (std::abs(p.imag()) < 1e-9) real_pole = p.real();
        else if (p.imag() > 0) pair = p;
    }
    CHECK(real_pole > 0.0);
    CHECK(pair.real() < 0.0);
    // Blocks are ordered by ascending real part: the pair first.
    CHECK(modal.A(0, 0) == Approx(pair.real()).epsilon(1e-8));
    CHECK(std::abs(modal.A(0, 1)) == Approx(pair.imag()).epsilon(1e-8));
    CHECK(modal.A(2, 2) == Approx(real_pole).epsilon(1e-8));

    for (double omega : {0.1, 1.0, 1.86, 10.0}) {
        const auto got = eval_freq(modal, omega);
        const auto want = eval_freq(g_a, omega);
        CHECK(std::abs(got - want) <= 1e-8 * std::abs(want));
    }
}
