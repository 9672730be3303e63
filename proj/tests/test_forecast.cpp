#include "csched/forecast.hpp"

#include <doctest.h>

#include <cmath>

#include "csched/errors.hpp"
#include "csched/synth.hpp"

using namespace csched;

namespace {

// A flat series with a constant one-step relative error e0 on every interval.
CarbonSeries flat_series(std::size_t n, double actual, double e0) {
    CarbonSeries s;
    s.start = parse_iso8601("2022-01-01T00:00Z");
    s.actual.assign(n, actual);
    s.forecast1.assign(n, actual * (1.0 + e0));
    s.validate();
    return s;
}

}  // namespace

TEST_CASE("one-step relative error") {
    CHECK(one_step_rel_error(200, 210) == doctest::Approx(0.05));
    CHECK(one_step_rel_error(200, 200) == doctest::Approx(0.0));
    CHECK(one_step_rel_error(200, 190) == doctest::Approx(-0.05));
    CHECK_THROWS_AS(one_step_rel_error(0, 100), ZeroActual);
}

TEST_CASE("error magnitude grows linearly with the horizon") {
    CHECK(scale_error_magnitude(0.05, 1, 9.97e-3) == doctest::Approx(0.05));
    CHECK(scale_error_magnitude(0.05, 97, 9.97e-3) ==
          doctest::Approx(0.05 * (1 + 0.95712)).epsilon(1e-12));
    CHECK(scale_error_magnitude(0.0, 1234, 9.97e-3) == doctest::Approx(0.0));
}

TEST_CASE("synthesis arithmetic at fixed signs") {
    ForecastModel m;
    m.lambda = 9.97e-3;

    // find a seed whose first sign is positive so the l=1 example is exact
    CarbonSeries s = flat_series(100, 200.0, 0.05);
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        m.sign_seed = seed;
        const SyntheticForecast f = synthesize(s, 0, 1, m);
        if (f.values[0] > 200.0) {
            CHECK(f.values[0] == doctest::Approx(210.0).epsilon(1e-12));
            break;
        }
    }

    // offset 97: 200 * (1 + 0.05*(1+lambda*96)) when the sign is positive
    m.sign_seed = 0;
    const SyntheticForecast f = synthesize(s, 0, 100, m);
    const double expect_mag = 0.05 * (1 + m.lambda * 96);
    CHECK(std::fabs(f.values[96] - 200.0) == doctest::Approx(200.0 * expect_mag).epsilon(1e-9));
    CHECK(f.values[96] == doctest::Approx(200.0 * (1.0 + f.rel_errors[96])).epsilon(1e-12));
}

TEST_CASE("zero growth keeps the one-step magnitude at every offset") {
    ForecastModel m;
    m.lambda = 0.0;
    const CarbonSeries s = flat_series(200, 150.0, 0.04);
    const SyntheticForecast f = synthesize(s, 0, 200, m);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        CHECK(std::fabs(f.rel_errors[i]) == doctest::Approx(0.04).epsilon(1e-12));
    }
}

TEST_CASE("identity values = actual*(1+rel_error) holds exactly") {
    SynthParams sp;
    sp.days = 10;
    const CarbonSeries s = make_synthetic_series(parse_iso8601("2022-06-01T00:00Z"), sp);
    ForecastModel m;
    m.sign_seed = 11;
    const SyntheticForecast f = synthesize(s, 37, 48 * 7, m);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        CHECK(f.values[i] == s.actual[37 + i] * (1.0 + f.rel_errors[i]));
        CHECK(f.values[i] >= 0.0);
    }
}

TEST_CASE("synthesis is deterministic and slice-invariant") {
    SynthParams sp;
    sp.days = 6;
    const CarbonSeries s = make_synthetic_series(parse_iso8601("2022-06-01T00:00Z"), sp);
    ForecastModel m;
    m.sign_seed = 5;
    const SyntheticForecast a = synthesize(s, 48, 96, m);
    const SyntheticForecast b = synthesize(s, 48, 96, m);
    CHECK(a.values == b.values);
    CHECK(a.rel_errors == b.rel_errors);

    // the same absolute window through a sliced series gives identical draws
    const CarbonSeries cut = s.slice(s.time_at(48), s.end());
    const SyntheticForecast c = synthesize(cut, 0, 96, m);
    CHECK(c.values == a.values);

    // a different datum re-randomizes the signs
    const SyntheticForecast d = synthesize(s, 49, 96, m);
    bool any_diff = false;
    for (std::size_t i = 0; i + 1 < a.values.size(); ++i)
        if ((a.rel_errors[i + 1] > 0) != (d.rel_errors[i] > 0)) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("window coverage is enforced") {
    const CarbonSeries s = flat_series(100, 200.0, 0.05);
    ForecastModel m;
    CHECK_THROWS_AS(synthesize(s, 50, 51, m), RangeError);
    CHECK_NOTHROW(synthesize(s, 50, 50, m));
}

TEST_CASE("fallback error applies without stored forecasts and at zero actuals") {
    CarbonSeries s;
    s.start = parse_iso8601("2022-01-01T00:00Z");
    s.actual.assign(50, 100.0);
    s.actual[10] = 0.0;  // zero actual: synthesized value must stay 0
    s.validate();
    ForecastModel m;
    m.lambda = 0.0;
    m.fallback_rel_error = 0.1;
    const SyntheticForecast f = synthesize(s, 0, 50, m);
    CHECK(f.values[10] == 0.0);
    for (std::size_t i = 0; i < 50; ++i) {
        if (i == 10) continue;
        CHECK(std::fabs(f.rel_errors[i]) == doctest::Approx(0.1));
    }
}

TEST_CASE("monte-carlo MAPE linearity and sign balance") {
    // constant e0 = 0.05; empirical mean |rel error| at offset l must track
    // e0*(1+lambda*(l-1)) and the signs must stay balanced
    const double e0 = 0.05;
    const double lambda = 9.97e-3;
    const CarbonSeries s = flat_series(250, 300.0, e0);
    ForecastModel m;
    m.lambda = lambda;

    const int n_windows = 10000;
    const std::vector<std::size_t> offsets = {1, 48, 96, 192};
    std::vector<double> mape(offsets.size(), 0.0);
    double sign_sum = 0.0;
    for (int w = 0; w < n_windows; ++w) {
        m.sign_seed = static_cast<std::uint64_t>(w);
        const SyntheticForecast f = synthesize(s, 0, 192, m);
        for (std::size_t k = 0; k < offsets.size(); ++k)
            mape[k] += std::fabs(f.values[offsets[k] - 1] - 300.0) / 300.0;
        sign_sum += f.rel_errors[0] > 0 ? 1.0 : -1.0;
    }
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        const double got = mape[k] / n_windows;
        const double want = e0 * (1.0 + lambda * (offsets[k] - 1.0));
        CHECK(std::fabs(got - want) / want < 0.02);
    }
    CHECK(std::fabs(sign_sum / n_windows) < 0.03);
}

TEST_CASE("scalar eps mode uses the window's first one-step error everywhere") {
    CarbonSeries s = flat_series(100, 200.0, 0.05);
    // make later one-step errors very different from the datum's
    for (std::size_t i = 1; i < s.size(); ++i) s.forecast1[i] = 200.0 * 1.5;
    ForecastModel m;
    m.lambda = 0.0;
    m.eps_mode = EpsMode::scalar;
    const SyntheticForecast f = synthesize(s, 0, 100, m);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(std::fabs(f.rel_errors[i]) == doctest::Approx(0.05).epsilon(1e-12));
}
