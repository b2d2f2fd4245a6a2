#include <doctest.h>

#include <cmath>
#include <vector>

#include "rtadf/mc.hpp"
#include "rtadf/recursive.hpp"
#include "rtadf/synth.hpp"

using namespace rtadf;

TEST_CASE("generators are deterministic in the seed") {
    NullSpec null_spec;
    const TimeSeries a = gen_random_walk(100, null_spec, 7);
    const TimeSeries b = gen_random_walk(100, null_spec, 7);
    CHECK(a.values == b.values);

    const TimeSeries c = gen_random_walk(100, null_spec, 8);
    bool differs = false;
    for (int i = 0; i < 8; ++i) differs = differs || a.values[i] != c.values[i];
    CHECK(differs);

    const EvansSpec spec{.T = 50};
    CHECK(gen_evans_bubble(spec, 3).series.values == gen_evans_bubble(spec, 3).series.values);
    CHECK(gen_evans_bubble(spec, 3).series.values != gen_evans_bubble(spec, 4).series.values);
}

TEST_CASE("sigma scales a driftless walk linearly and leaves statistics unchanged") {
    NullSpec unit;
    unit.drift_scale = 0.0;
    NullSpec scaled = unit;
    scaled.innovation_sd = 12.5;
    const TimeSeries a = gen_random_walk(200, unit, 31);
    const TimeSeries b = gen_random_walk(200, scaled, 31);
    for (int i = 0; i < 200; ++i)
        CHECK(b.values[static_cast<std::size_t>(i)] ==
              doctest::Approx(12.5 * a.values[static_cast<std::size_t>(i)]).epsilon(1e-12));

    TestConfig cfg;
    cfg.rolling_width = 40;
    CHECK(adf_full(b, cfg) == doctest::Approx(adf_full(a, cfg)).epsilon(1e-11));
    CHECK(sadf(b, cfg).first == doctest::Approx(sadf(a, cfg).first).epsilon(1e-11));
    CHECK(radf(b, cfg).first == doctest::Approx(radf(a, cfg).first).epsilon(1e-11));
    CHECK(gsadf(b, cfg) == doctest::Approx(gsadf(a, cfg)).epsilon(1e-11));
}

TEST_CASE("explosive ar1 is continuous in rho at the unit root") {
    NullSpec driftless;
    driftless.drift_scale = 0.0;
    const TimeSeries walk = gen_random_walk(200, driftless, 17);
    const TimeSeries ar = gen_explosive_ar1(200, 1.0 + 1e-12, 1.0, 100, 17);
    for (int i = 0; i < 200; ++i)
        CHECK(std::fabs(ar.values[static_cast<std::size_t>(i)] -
                        walk.values[static_cast<std::size_t>(i)]) < 1e-6);
}

TEST_CASE("noiseless explosive ar1 grows like rho^k from the start level") {
    const TimeSeries s = gen_explosive_ar1(60, 1.05, 0.0, 20, 5, /*start_level=*/1.0);
    for (int t = 0; t < 20; ++t) CHECK(s.values[static_cast<std::size_t>(t)] == 1.0);
    for (int t = 20; t < 60; ++t)
        CHECK(s.values[static_cast<std::size_t>(t)] ==
              doctest::Approx(std::pow(1.05, t - 19)).epsilon(1e-12));
}

TEST_CASE("explosive ar1 rejects bad parameters") {
    CHECK_THROWS_AS(gen_explosive_ar1(50, 0.99, 1.0, 10, 0), config_error);
    CHECK_THROWS_AS(gen_explosive_ar1(50, 1.05, 1.0, 50, 0), config_error);
    CHECK_THROWS_AS(gen_explosive_ar1(50, 1.05, 1.0, -1, 0), config_error);
}

TEST_CASE("gsadf has power against a late explosive regime") {
    TestConfig cfg;
    NullSpec null_spec;
    const CriticalValues cv = critical_values(TestKind::gsadf, 200, cfg, null_spec, 1000, 77, 0);
    int rejections = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const TimeSeries s = gen_explosive_ar1(200, 1.05, 1.0, 150, seed);
        if (gsadf(s, cfg) > cv.quantiles.at(95)) ++rejections;
    }
    CHECK(rejections >= 80);
}

TEST_CASE("noiseless evans bubble compounds deterministically and never collapses") {
    EvansSpec spec;
    spec.tau = 0.0;
    spec.pi = 1.0;
    spec.T = 60;
    const EvansSample sample = gen_evans_bubble(spec, 9);
    for (int t = 0; t < 60; ++t)
        CHECK(sample.series.values[static_cast<std::size_t>(t)] ==
              doctest::Approx(0.5 * std::pow(1.05, t)).epsilon(1e-12));
    CHECK(sample.collapse_indices.empty());
    // Mask switches on exactly when B crosses the threshold and stays on.
    bool seen_regime = false;
    for (int t = 0; t < 60; ++t) {
        const bool in = sample.regime_mask[static_cast<std::size_t>(t)] != 0;
        if (seen_regime) CHECK(in);
        seen_regime = seen_regime || in;
        CHECK(in == (sample.series.values[static_cast<std::size_t>(t)] > 1.0));
    }
    CHECK(seen_regime);
}

TEST_CASE("lognormal shocks have mean one") {
    Rng rng = Rng::from_stream(77, StreamDomain::generator, 0);
    const double tau = 0.05;
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) sum += std::exp(tau * rng.next_normal() - tau * tau / 2.0);
    CHECK(std::fabs(sum / 100000.0 - 1.0) < 0.005);
}

TEST_CASE("evans bubbles stay positive and collapse in nearly every long run") {
    EvansSpec spec;
    spec.T = 400;
    int with_collapse = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const EvansSample sample = gen_evans_bubble(spec, seed);
        bool positive = true;
        for (double v : sample.series.values) positive = positive && v > 0.0;
        CHECK(positive);

        // Falling edges of the regime mask.
        int falls = 0;
        for (int t = 1; t < spec.T; ++t)
            if (sample.regime_mask[static_cast<std::size_t>(t - 1)] != 0 &&
                sample.regime_mask[static_cast<std::size_t>(t)] == 0)
                ++falls;
        if (falls > 0) ++with_collapse;

        // Every recorded collapse draw lands on a falling edge; extra falling
        // edges can only come from a sub-threshold dip with a surviving draw.
        for (int idx : sample.collapse_indices) {
            CHECK(sample.regime_mask[static_cast<std::size_t>(idx - 1)] != 0);
            CHECK(sample.regime_mask[static_cast<std::size_t>(idx)] == 0);
        }
        CHECK(falls >= static_cast<int>(sample.collapse_indices.size()));
    }
    CHECK(with_collapse >= 95);
}

TEST_CASE("evans spec validation") {
    EvansSpec spec;
    spec.T = 50;
    spec.delta = 1.5;  // above the threshold
    CHECK_THROWS_AS(gen_evans_bubble(spec, 0), config_error);
    spec = EvansSpec{.pi = 0.0, .T = 50};
    CHECK_THROWS_AS(gen_evans_bubble(spec, 0), config_error);
    spec = EvansSpec{.T = 1};
    CHECK_THROWS_AS(gen_evans_bubble(spec, 0), config_error);
}

TEST_CASE("gsadf holds its size on driftless null walks") {
    // Generator-level size study: fresh walks against an independently
    // simulated critical value.
    TestConfig cfg;
    NullSpec null_spec;
    null_spec.drift_scale = 0.0;
    const CriticalValues cv = critical_values(TestKind::gsadf, 500, cfg, null_spec, 1000, 1234, 0);
    int rejections = 0;
    for (std::uint64_t seed = 5000; seed < 5200; ++seed) {
        const TimeSeries s = gen_random_walk(500, null_spec, seed);
        if (gsadf(s, cfg) > cv.quantiles.at(95)) ++rejections;
    }
    const double rate = rejections / 200.0;
    CHECK(rate >= 0.02);
    CHECK(rate <= 0.08);
}
