#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <vector>

#include "coopgame/ebm.hpp"
#include "coopgame/harness.hpp"
#include "coopgame/solver.hpp"
#include "test_util.hpp"

using namespace coopgame;

TEST_CASE("additive game reaches its fixed point in one step") {
    AdditiveGame add({1.0, -2.0, 0.5});
    SolverConfig cfg;
    cfg.init = {0.1, 0.9, 0.4};
    cfg.max_steps = 2;
    cfg.tol = 0.0;
    auto traj = mfi_full_gradient(add, cfg);
    REQUIRE(traj.steps.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(traj.steps[1][i] == doctest::Approx(sigmoid(add.coefficients()[i])).epsilon(1e-14));
        CHECK(traj.steps[2][i] == traj.steps[1][i]);  // constant gradient: exact fixed point
    }
    CHECK(traj.stepwise_diff[1] == 0.0);
}

TEST_CASE("one full-gradient step on the reference game") {
    auto g2 = testutil::g2();
    SolverConfig cfg;
    cfg.init = uniform_init(2, 0.5);
    cfg.max_steps = 1;
    auto traj = mfi_full_gradient(*g2, cfg);
    CHECK(traj.steps.back()[0] == doctest::Approx(sigmoid(1.5)).epsilon(1e-14));
    CHECK(traj.steps.back()[1] == doctest::Approx(sigmoid(2.5)).epsilon(1e-14));
    CHECK(traj.steps.back()[0] == doctest::Approx(0.81757).epsilon(1e-5));
    CHECK(traj.steps.back()[1] == doctest::Approx(0.92414).epsilon(1e-5));
    CHECK(traj.final_logits[0] == doctest::Approx(1.5).epsilon(1e-14));
}

// Scalar reference iteration for G2: x0 = sigmoid(1 + x1), x1 = sigmoid(2 + x0).
static void g2_fixed_point(double& x0, double& x1) {
    x0 = 0.5;
    x1 = 0.5;
    for (int k = 0; k < 200; ++k) {
        double n0 = sigmoid(1.0 + x1), n1 = sigmoid(2.0 + x0);
        x0 = n0;
        x1 = n1;
    }
}

TEST_CASE("reference game converges to the known fixed point") {
    auto g2 = testutil::g2();
    SolverConfig cfg;
    cfg.init = uniform_init(2, 0.5);
    cfg.max_steps = 20;
    auto traj = mfi_full_gradient(*g2, cfg);
    REQUIRE(traj.converged_at.has_value());
    CHECK(*traj.converged_at <= 10);
    double x0, x1;
    g2_fixed_point(x0, x1);
    CHECK(traj.final_marginals()[0] == doctest::Approx(x0).epsilon(1e-6));
    CHECK(traj.final_marginals()[1] == doctest::Approx(x1).epsilon(1e-6));
    CHECK(x0 == doctest::Approx(0.8751).epsilon(2e-4));
    CHECK(x1 == doctest::Approx(0.9466).epsilon(2e-4));
}

TEST_CASE("naive solver sweeps coordinates against the freshest x") {
    AdditiveGame add({1.0, -2.0, 0.5});
    SolverConfig cfg;
    cfg.init = {0.2, 0.2, 0.2};
    cfg.max_steps = 1;
    auto traj = mfi_naive(add, cfg);
    for (int i = 0; i < 3; ++i)
        CHECK(traj.steps.back()[i] == doctest::Approx(sigmoid(add.coefficients()[i])).epsilon(1e-14));

    auto g2 = testutil::g2();
    SolverConfig cfg2;
    cfg2.init = uniform_init(2, 0.5);
    cfg2.max_steps = 1;
    auto t2 = mfi_naive(*g2, cfg2);
    const double x0 = sigmoid(1.5);
    CHECK(t2.steps.back()[0] == doctest::Approx(x0).epsilon(1e-14));
    CHECK(t2.steps.back()[1] == doctest::Approx(sigmoid(2.0 + x0)).epsilon(1e-14));
    CHECK(t2.steps.back()[1] == doctest::Approx(0.9436).epsilon(1e-4));
}

TEST_CASE("naive solver never decreases the exact ELBO at any coordinate update") {
    std::mt19937_64 eng(61);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + static_cast<int>(eng() % 7);
        auto g = random_tabulated_game(n, eng());
        SolverConfig cfg;
        cfg.init = uniform_init(n, 0.3 + 0.05 * (trial % 9));
        cfg.max_steps = 4;
        cfg.tol = 0.0;
        cfg.track_elbo = true;
        auto traj = mfi_naive(*g, cfg);
        REQUIRE(traj.elbo_per_update.size() == static_cast<std::size_t>(4 * n));
        double prev = elbo(*g, cfg.temperature, cfg.init);
        for (double e : traj.elbo_per_update) {
            CHECK(e >= prev - 1e-10);
            prev = e;
        }
    }
}

TEST_CASE("run_to_convergence diagnostics") {
    AdditiveGame add({1.0, -2.0});
    auto traj = run_to_convergence(add, 1.0, uniform_init(2, 0.5), 1e-12, 50);
    REQUIRE(traj.converged_at.has_value());
    CHECK(*traj.converged_at == 1);
    CHECK(traj.stepwise_diff[1] == 0.0);

    auto g2 = testutil::g2();
    auto t2 = run_to_convergence(*g2, 1.0, uniform_init(2, 0.5), 1e-10, 50);
    REQUIRE(t2.converged_at.has_value());
    CHECK(*t2.converged_at >= 3);
    CHECK(*t2.converged_at <= 15);

    auto t3 = run_to_convergence(*g2, 1.0, uniform_init(2, 0.5), 1e-12, 0);
    CHECK(t3.steps.size() == 1);
    CHECK(t3.steps[0] == uniform_init(2, 0.5));
    CHECK_FALSE(t3.converged_at.has_value());

    // a tolerance no finite difference reaches: non-convergence is flagged, not fatal
    auto t4 = run_to_convergence(*g2, 1.0, uniform_init(2, 0.5), 0.0, 5);
    CHECK_FALSE(t4.converged_at.has_value());
    CHECK(t4.steps.size() == 6);
}

TEST_CASE("fixed-point residual and stationarity at convergence") {
    std::mt19937_64 eng(71);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(eng() % 6);
        auto g = random_tabulated_game(n, eng());
        // converge well past the default so the logit-stationarity check at
        // 1e-6 has headroom; the residual bound uses the tol actually run
        const double tol = 1e-18;
        auto traj = run_to_convergence(*g, 1.0, uniform_init(n, 0.5), tol, 500);
        if (!traj.converged_at.has_value()) continue;
        const auto& x = traj.final_marginals();
        auto grad = mt_gradient_exact(*g, x);
        for (int i = 0; i < n; ++i) {
            CHECK(std::fabs(x[i] - sigmoid(grad.g[i])) <= 10.0 * std::sqrt(tol * n));
            CHECK(std::fabs(grad.g[i] - std::log(x[i] / (1.0 - x[i]))) <= 1e-6);
        }
    }
}

TEST_CASE("symmetric players stay bitwise equal under the full-gradient solver") {
    std::mt19937_64 eng(81);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 3 + static_cast<int>(eng() % 5);
        auto cases = gen_axiom_suite(eng(), n, 1);
        for (const auto& cs : cases) {
            if (cs.relation != AxiomRelation::kSymmetricPair) continue;
            SolverConfig cfg;
            cfg.init = uniform_init(n, 0.25);
            cfg.max_steps = 10;
            cfg.tol = 0.0;
            auto traj = mfi_full_gradient(*cs.game_a, cfg);
            for (const auto& x : traj.steps) CHECK(x[cs.player_i] == x[cs.player_j]);
        }
    }
}

TEST_CASE("iterates stay in the open unit cube") {
    AdditiveGame g({30.0, -30.0});  // steep but not past double sigmoid saturation
    SolverConfig cfg;
    cfg.init = {0.0, 1.0};  // vertex init is allowed; the first update moves inside
    cfg.max_steps = 3;
    cfg.tol = 0.0;
    auto traj = mfi_full_gradient(g, cfg);
    for (std::size_t k = 1; k < traj.steps.size(); ++k)
        for (double v : traj.steps[k]) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
}

TEST_CASE("sampled and one-shot gradient modes run deterministically") {
    auto g = random_tabulated_game(5, 13);
    SolverConfig cfg;
    cfg.init = uniform_init(5, 0.5);
    cfg.max_steps = 5;
    cfg.tol = 0.0;
    cfg.gradient = SampledGradient{200, 42};
    auto a = mfi_full_gradient(*g, cfg);
    auto b = mfi_full_gradient(*g, cfg);
    CHECK(a.steps == b.steps);

    cfg.gradient = CachedGradient{std::make_shared<OneShotCache>(*g, 200, 42)};
    auto c = mfi_full_gradient(*g, cfg);
    auto d = mfi_full_gradient(*g, cfg);
    CHECK(c.steps == d.steps);
    // both approximate solvers should land near the exact fixed point
    cfg.gradient = ExactGradient{};
    auto exact = mfi_full_gradient(*g, cfg);
    CHECK(testutil::max_abs_diff(a.final_marginals(), exact.final_marginals()) < 0.2);
    CHECK(testutil::max_abs_diff(c.final_marginals(), exact.final_marginals()) < 0.2);
}

TEST_CASE("trajectory CSV export") {
    auto g2 = testutil::g2();
    SolverConfig cfg;
    cfg.init = uniform_init(2, 0.5);
    cfg.max_steps = 3;
    cfg.tol = 0.0;
    cfg.track_elbo = true;
    auto traj = mfi_full_gradient(*g2, cfg);
    std::ostringstream out;
    traj.write_csv(out);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "step,x_0,x_1,stepwise_diff,elbo");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);  // initializer + 3 steps
    CHECK(out.str().find("0,0.5,0.5,,") == out.str().find('\n') + 1);
}

TEST_CASE("solver config validation") {
    auto g2 = testutil::g2();
    SolverConfig cfg;
    cfg.init = uniform_init(2, 0.5);
    cfg.temperature = 0.0;
    CHECK_THROWS_AS(mfi_full_gradient(*g2, cfg), input_error);
    cfg.temperature = 1.0;
    cfg.init = {0.5};
    CHECK_THROWS_AS(mfi_full_gradient(*g2, cfg), input_error);
    CHECK_THROWS_AS(uniform_init(2, 1.5), input_error);
    cfg.init = uniform_init(2, 0.5);
    cfg.max_steps = -1;
    CHECK_THROWS_AS(mfi_naive(*g2, cfg), input_error);
}
