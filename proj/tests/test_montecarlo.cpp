#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "homodyne/ensemble.hpp"
#include "homodyne/information.hpp"
#include "homodyne/montecarlo.hpp"

using namespace homodyne;
using Catch::Approx;

namespace {

SimConfig short_config(std::uint64_t seed) {
    SimConfig cfg;
    cfg.seed = seed;
    cfg.t_max = 4.0;
    return cfg;
}

} // namespace

TEST_CASE("derive_stream_seed", "[montecarlo]") {
    CHECK(derive_stream_seed(7, 3, StreamPurpose::noise) ==
          derive_stream_seed(7, 3, StreamPurpose::noise));
    CHECK(derive_stream_seed(7, 3, StreamPurpose::noise) !=
          derive_stream_seed(7, 3, StreamPurpose::symbol));
    CHECK(derive_stream_seed(7, 3, StreamPurpose::noise) !=
          derive_stream_seed(8, 3, StreamPurpose::noise));
}

TEST_CASE("derive_stream_seed has no collisions over 1e6 probes", "[montecarlo][property]") {
    std::vector<std::uint64_t> seeds;
    seeds.reserve(1'000'000);
    for (std::uint64_t i = 0; i < 500'000; ++i) {
        seeds.push_back(derive_stream_seed(42, i, StreamPurpose::noise));
        seeds.push_back(derive_stream_seed(42, i, StreamPurpose::symbol));
    }
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("noise seeds are shared across policies only with CRN", "[montecarlo]") {
    CHECK(noise_master_seed(9, PolicyKind::lmmi, true) ==
          noise_master_seed(9, PolicyKind::heterodyne, true));
    CHECK(noise_master_seed(9, PolicyKind::lmmi, false) !=
          noise_master_seed(9, PolicyKind::heterodyne, false));
}

TEST_CASE("draw_symbol follows the priors", "[montecarlo][property]") {
    const std::vector<double> priors = {0.1, 0.0, 0.6, 0.3};
    std::vector<int> counts(priors.size(), 0);
    Rng rng(3);
    const int n = 200'000;
    for (int i = 0; i < n; ++i) {
        ++counts[draw_symbol(priors, rng)];
    }
    CHECK(counts[1] == 0);
    for (std::size_t k = 0; k < priors.size(); ++k) {
        const double expected = n * priors[k];
        CHECK(std::abs(counts[k] - expected) <= 5.0 * std::sqrt(expected + 1.0));
    }
}

TEST_CASE("run_batch edge cases", "[montecarlo]") {
    SECTION("single-state ensemble") {
        const auto s = run_batch(make_psk(1, 1.0), PolicySpec::lmmi(), short_config(1), 20);
        CHECK(s.mean_gain == 0.0);
        REQUIRE(s.std_gain.has_value());
        CHECK(*s.std_gain == 0.0);
        CHECK(*s.ci_half_width == 0.0);
    }
    SECTION("one trajectory has no spread estimate") {
        const auto s = run_batch(make_star(), PolicySpec::lmmi(), short_config(1), 1);
        CHECK_FALSE(s.std_gain.has_value());
        CHECK_FALSE(s.ci_half_width.has_value());
        CHECK(std::isfinite(s.mean_gain));
    }
    SECTION("zero trajectories is an error") {
        CHECK_THROWS_AS(run_batch(make_star(), PolicySpec::lmmi(), short_config(1), 0),
                        std::invalid_argument);
    }
    SECTION("bad config propagates") {
        SimConfig cfg;
        cfg.dt = -1.0;
        CHECK_THROWS_AS(run_batch(make_star(), PolicySpec::lmmi(), cfg, 3), std::invalid_argument);
    }
}

TEST_CASE("run_batch statistics", "[montecarlo]") {
    const auto e = make_builtin("8psk");
    const auto s = run_batch(e, PolicySpec::lmmi(), short_config(17), 300);
    REQUIRE(s.std_gain.has_value());
    CHECK(*s.ci_half_width == 2.0 * *s.std_gain / std::sqrt(300.0));
    CHECK(s.mean_gain > 0.0);
    CHECK(s.mean_gain <= shannon_entropy(e.priors()));
    CHECK(check_batch_invariants(s, e).empty());

    std::size_t total = 0;
    double weighted = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
        total += s.per_symbol_counts[k];
        if (s.per_symbol_means[k]) {
            weighted += *s.per_symbol_means[k] * static_cast<double>(s.per_symbol_counts[k]);
        }
    }
    CHECK(total == 300);
    CHECK(weighted / 300.0 == Approx(s.mean_gain).epsilon(1e-12));
    CHECK(s.ensemble_label == "8psk");
    CHECK(s.policy.kind == PolicyKind::lmmi);
    CHECK(s.config.seed == 17);
}

TEST_CASE("run_batch is invariant to the worker count", "[montecarlo][property]") {
    for (const auto &policy : {PolicySpec::lmmi(), PolicySpec::wiseman()}) {
        BatchOptions one{.workers = 1};
        BatchOptions eight{.workers = 8};
        const auto a = run_batch(make_star(), policy, short_config(5), 120, one);
        const auto b = run_batch(make_star(), policy, short_config(5), 120, eight);
        CHECK(a.mean_gain == b.mean_gain);
        CHECK(a.std_gain == b.std_gain);
        CHECK(a.per_symbol_counts == b.per_symbol_counts);
        CHECK(a.per_symbol_means == b.per_symbol_means);
    }
}

TEST_CASE("symbol sequences are shared across policies", "[montecarlo]") {
    const auto cfg = short_config(11);
    const auto a = run_batch(make_qam16(), PolicySpec::heterodyne(), cfg, 100);
    const auto b = run_batch(make_qam16(), PolicySpec::lmmi(), cfg, 100);
    CHECK(a.per_symbol_counts == b.per_symbol_counts);
}

TEST_CASE("quadrupling n halves the confidence half-width", "[montecarlo][property]") {
    const auto cfg = short_config(21);
    const auto small = run_batch(make_star(), PolicySpec::heterodyne(), cfg, 250);
    const auto large = run_batch(make_star(), PolicySpec::heterodyne(), cfg, 1000);
    const double ratio = *large.ci_half_width / *small.ci_half_width;
    CHECK(ratio == Approx(0.5).epsilon(0.25));
}

TEST_CASE("check_batch_invariants flags impossible results", "[montecarlo]") {
    const auto e = make_builtin("8psk");
    auto s = run_batch(e, PolicySpec::heterodyne(), short_config(2), 50);
    REQUIRE(check_batch_invariants(s, e).empty());
    s.mean_gain = 3.5; // above log2(8)
    CHECK(check_batch_invariants(s, e).size() == 1);
    s.mean_gain = -1.0;
    CHECK(check_batch_invariants(s, e).size() == 1);
    s.mean_gain = 1.0;
    s.ci_half_width = 123.0;
    CHECK(check_batch_invariants(s, e).size() == 1);
}

TEST_CASE("compare_policies", "[montecarlo]") {
    const auto cmp = compare_policies(make_builtin("8psk"), short_config(3), 40);
    CHECK(cmp.ensemble_label == "8psk");
    CHECK(cmp.mean_photons == Approx(2.0));
    CHECK(cmp.heterodyne_limit == Approx(1.585).margin(5e-4));
    CHECK(cmp.holevo == Approx(2.449).margin(1e-3));
    CHECK(cmp.heterodyne.policy.kind == PolicyKind::heterodyne);
    CHECK(cmp.wiseman.policy.kind == PolicyKind::wiseman);
    CHECK(cmp.lmmi.policy.kind == PolicyKind::lmmi);
    for (const auto *s : {&cmp.heterodyne, &cmp.wiseman, &cmp.lmmi}) {
        CHECK(s->n_trajectories == 40);
        CHECK(s->mean_gain <= cmp.holevo + 3.0 * *s->ci_half_width);
    }
}

TEST_CASE("parallel_for rethrows worker exceptions", "[montecarlo]") {
    CHECK_THROWS_AS(parallel_for(100, 4,
                                 [](std::size_t i) {
                                     if (i == 37) {
                                         throw std::runtime_error("boom");
                                     }
                                 }),
                    std::runtime_error);
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 3, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}
