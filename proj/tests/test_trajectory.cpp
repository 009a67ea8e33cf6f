#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "homodyne/ensemble.hpp"
#include "homodyne/montecarlo.hpp"
#include "homodyne/trajectory.hpp"
#include "oracles.hpp"

using namespace homodyne;
using Catch::Approx;

namespace {

Ensemble pair_at(double a) {
    return Ensemble("pair", {{0.5, {a, 0.0}}, {0.5, {-a, 0.0}}});
}

} // namespace

TEST_CASE("SimConfig validation", "[trajectory]") {
    SimConfig cfg;
    CHECK(cfg.dt == 5e-3);
    CHECK(cfg.t_max == 10.0);
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.steps() == 2000);

    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.dt = 3e-3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument); // 10 / 0.003 is not an integer
    cfg.dt = 5e-3;
    cfg.t_max = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("expected_charge", "[trajectory]") {
    CHECK(expected_charge({1.0, 0.0}, 0.0, 0.0, 0.005) == Approx(0.01).epsilon(1e-15));
    CHECK(expected_charge({0.0, 1.0}, 0.0, 3.0, 0.005) == 0.0);
    CHECK(expected_charge({1.0, 0.0}, 0.0, 2.0, 0.005) == Approx(0.0036787944117144234).epsilon(1e-14));
    CHECK(expected_charge({0.0, 1.0}, std::numbers::pi / 2, 0.0, 0.005) == Approx(0.01));
}

TEST_CASE("signal decay integrates to 4(1 - exp(-t_max/2))", "[trajectory][property]") {
    const SimConfig cfg;
    double sum = 0.0;
    for (std::int64_t i = 0; i < cfg.steps(); ++i) {
        sum += expected_charge({1.0, 0.0}, 0.0, static_cast<double>(i) * cfg.dt, cfg.dt);
    }
    // Left Riemann sum of 2 exp(-t/2): exact geometric-series value.
    const double geometric =
        2.0 * cfg.dt * -std::expm1(-0.5 * cfg.t_max) / -std::expm1(-0.5 * cfg.dt);
    CHECK(sum == Approx(geometric).epsilon(1e-12));
    // The integral differs from the sum by the O(dt/4) left-endpoint bias.
    const double integral = 4.0 * (1.0 - std::exp(-0.5 * cfg.t_max));
    CHECK(std::abs(sum / integral - 1.0) < 0.0013);
}

TEST_CASE("sample_photocharge moments", "[trajectory][property]") {
    const double dt = 5e-3;
    const CoherentAmplitude alpha(std::sqrt(2.0), 0.0);
    Rng rng(123);
    const int n = 1'000'000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double q = sample_photocharge(alpha, 0.0, 0.0, dt, rng);
        sum += q;
        sum_sq += q * q;
    }
    const double mean = sum / n;
    const double var = (sum_sq - n * mean * mean) / (n - 1);
    const double mu = 2.0 * std::sqrt(2.0) * dt;
    CHECK(std::abs(mean - mu) < 4.0 * std::sqrt(dt / n));
    // Var of the sample variance of a Gaussian is 2 dt^2 / (n - 1).
    CHECK(std::abs(var - dt) < 4.0 * dt * std::sqrt(2.0 / (n - 1)));
    CHECK(std::abs(var / dt - 1.0) < 0.01);
}

TEST_CASE("bayes_update examples", "[trajectory]") {
    const double dt = 0.005;
    SECTION("constant likelihood leaves the posterior unchanged") {
        // Every state has X = 1, so at phase 0 all mean charges coincide.
        const Ensemble line("line", {{0.25, {1.0, 0.0}}, {0.25, {1.0, 1.0}}, {0.5, {1.0, -2.0}}});
        const std::vector<double> p3 = {0.25, 0.25, 0.5};
        const auto post = bayes_update(p3, 0.37, line, 0.0, 0.4, dt);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(post[k] == Approx(p3[k]).epsilon(1e-14));
        }
    }
    SECTION("two states, dQ = 0.1") {
        const auto post = bayes_update(std::vector<double>{0.5, 0.5}, 0.1, pair_at(1.0), 0.0, 0.0, dt);
        CHECK(post[0] == Approx(0.598687660112452).epsilon(1e-12));
        CHECK(post[1] == Approx(0.401312339887548).epsilon(1e-12));
    }
    SECTION("point mass is absorbing") {
        for (double q : {-3.0, -0.1, 0.0, 0.2, 5.0}) {
            const auto post = bayes_update(std::vector<double>{1.0, 0.0}, q, pair_at(1.0), 0.0, 0.0, dt);
            CHECK(post[0] == 1.0);
            CHECK(post[1] == 0.0);
        }
    }
    SECTION("extreme evidence does not underflow") {
        const auto post =
            bayes_update(std::vector<double>{0.5, 0.5}, 1e4, pair_at(30.0), 0.0, 0.0, dt);
        CHECK(post[0] == 1.0);
        CHECK(post[1] == 0.0);
    }
}

TEST_CASE("bayes_update agrees with explicit Gaussian densities", "[trajectory][property]") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> charge(0.0, 0.07);
    std::uniform_real_distribution<double> phase(0.0, 6.0);
    const double dt = 5e-3;
    for (int trial = 0; trial < 500; ++trial) {
        const auto e = oracle::random_ensemble(1 + trial % 12, rng);
        const auto prior = oracle::random_simplex(e.size(), rng);
        const double q = charge(rng);
        const double phi = phase(rng);
        const double t = 0.01 * trial;
        std::vector<double> means(e.size());
        for (std::size_t k = 0; k < e.size(); ++k) {
            means[k] = expected_charge(e.amplitudes()[k], phi, t, dt);
        }
        const auto expected = oracle::direct_bayes(prior, q, means, dt);
        const auto post = bayes_update(prior, q, e, phi, t, dt);
        for (std::size_t k = 0; k < e.size(); ++k) {
            CHECK(post[k] == Approx(expected[k]).epsilon(1e-10).margin(1e-14));
        }
    }
}

TEST_CASE("posterior stays normalized over 1e5 random steps", "[trajectory][property]") {
    Rng rng(77);
    const auto e = make_qam16();
    std::vector<double> post = e.priors();
    std::uniform_real_distribution<double> phase(-4.0, 4.0);
    std::uniform_int_distribution<std::size_t> pick(0, e.size() - 1);
    const double dt = 5e-3;
    std::size_t truth = pick(rng);
    bool all_ok = true;
    for (int step = 0; step < 100'000; ++step) {
        if (step % 2000 == 0) {
            post = e.priors();
            truth = pick(rng);
        }
        const double phi = phase(rng);
        const double t = dt * (step % 2000);
        const double q = sample_photocharge(e.amplitudes()[truth], phi, t, dt, rng);
        post = bayes_update(post, q, e, phi, t, dt);
        double total = 0.0;
        for (double p : post) {
            all_ok = all_ok && p >= 0.0 && p <= 1.0;
            total += p;
        }
        all_ok = all_ok && std::abs(total - 1.0) <= 1e-9;
    }
    CHECK(all_ok);
}

TEST_CASE("info_gain", "[trajectory]") {
    const std::vector<double> u2 = {0.5, 0.5};
    CHECK(info_gain(u2, u2) == 0.0);
    CHECK(info_gain(u2, std::vector<double>{1.0, 0.0}) == Approx(1.0));
    CHECK(info_gain(std::vector<double>(8, 0.125),
                    std::vector<double>{0.25, 0.25, 0.25, 0.25, 0, 0, 0, 0}) == Approx(1.0));
    CHECK(info_gain(std::vector<double>{0.9, 0.1}, u2) < 0.0);
}

TEST_CASE("run_trajectory basics", "[trajectory]") {
    SimConfig cfg;
    SECTION("single-state ensemble gains nothing") {
        const auto e = make_psk(1, 1.0);
        Rng rng(1);
        const auto r = run_trajectory(e, 0, PolicySpec::lmmi(), cfg, rng);
        CHECK(r.total_gain == 0.0);
        REQUIRE(r.final_posterior.size() == 1);
        CHECK(r.final_posterior[0] == 1.0);
    }
    SECTION("invalid true index") {
        Rng rng(1);
        CHECK_THROWS_AS(run_trajectory(make_star(), 10, PolicySpec::lmmi(), cfg, rng),
                        std::out_of_range);
    }
    SECTION("record has one entry per step") {
        cfg.log_record = true;
        Rng rng(5);
        const auto r = run_trajectory(make_star(), 4, PolicySpec::wiseman(), cfg, rng);
        REQUIRE(r.record.has_value());
        REQUIRE(r.record->size() == 2000);
        CHECK(r.record->front().t == 0.0);
        CHECK(r.record->back().t == Approx(10.0 - 5e-3));
        CHECK(r.record->back().posterior == r.final_posterior);
    }
}

TEST_CASE("telescoping gain identity", "[trajectory][property]") {
    const std::vector<Ensemble> ensembles = {make_builtin("8psk"), make_qam16(), make_star()};
    for (const auto &e : ensembles) {
        for (const auto &policy :
             {PolicySpec::heterodyne(), PolicySpec::wiseman(), PolicySpec::lmmi()}) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                Rng rng(seed);
                const auto r = run_trajectory(e, seed % e.size(), policy, SimConfig{}, rng);
                CHECK(r.total_gain ==
                      Approx(shannon_entropy(e.priors()) - shannon_entropy(r.final_posterior))
                          .margin(1e-9));
                CHECK(r.initial_entropy == Approx(shannon_entropy(e.priors())).margin(1e-12));
            }
        }
    }
}

TEST_CASE("identical seeds give bit-identical trajectories", "[trajectory][property]") {
    const auto e = make_star();
    SimConfig cfg;
    cfg.log_record = true;
    Rng a(2718);
    Rng b(2718);
    const auto ra = run_trajectory(e, 7, PolicySpec::lmmi(), cfg, a);
    const auto rb = run_trajectory(e, 7, PolicySpec::lmmi(), cfg, b);
    CHECK(ra.total_gain == rb.total_gain);
    CHECK(ra.final_posterior == rb.final_posterior);
    CHECK(ra.projector_a == rb.projector_a);
    CHECK(ra.projector_b == rb.projector_b);
    for (std::size_t i = 0; i < ra.record->size(); ++i) {
        REQUIRE((*ra.record)[i].charge == (*rb.record)[i].charge);
    }
}

TEST_CASE("noiseless record drives the posterior toward the truth", "[trajectory][property]") {
    const Ensemble e("real pair", {{0.5, {1.0, 0.0}}, {0.5, {0.3, 0.0}}});
    SimConfig cfg;
    cfg.zero_noise = true;
    cfg.log_record = true;
    Rng rng(0);
    const auto r = run_trajectory(e, 0, PolicySpec::fixed(0.0), cfg, rng);
    double prev = 0.5;
    for (const auto &step : *r.record) {
        REQUIRE(step.posterior[0] >= prev);
        prev = step.posterior[0];
    }
    CHECK(prev > 0.5);

    // With zero noise the charge equals the expected charge exactly.
    for (std::size_t i = 0; i < 10; ++i) {
        const auto &step = (*r.record)[i];
        CHECK(step.charge == Approx(expected_charge({1.0, 0.0}, 0.0, step.t, cfg.dt)).epsilon(1e-15));
    }
}

TEST_CASE("well-separated pair is discriminated", "[trajectory]") {
    const auto e = pair_at(5.0);
    const SimConfig cfg;
    int confident = 0;
    double gain_sum = 0.0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        Rng rng(derive_stream_seed(99, static_cast<std::uint64_t>(i), StreamPurpose::noise));
        const std::size_t truth = static_cast<std::size_t>(i % 2);
        const auto r = run_trajectory(e, truth, PolicySpec::fixed(0.0), cfg, rng);
        confident += r.final_posterior[truth] >= 0.999 ? 1 : 0;
        gain_sum += r.total_gain;
    }
    CHECK(confident >= 990);
    CHECK(gain_sum / n == Approx(1.0).margin(0.01));
}
