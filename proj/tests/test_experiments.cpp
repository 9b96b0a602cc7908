#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "milburn/experiments.hpp"
#include "milburn/io.hpp"

using namespace milburn;

TEST(TimeGrid, EndpointsAndSpacing) {
    const TimeGrid g{0.0, 100.0, 2001};
    EXPECT_EQ(g.at(0), 0.0);
    EXPECT_EQ(g.at(2000), 100.0);
    EXPECT_DOUBLE_EQ(g.at(1), 0.05);
    EXPECT_DOUBLE_EQ(g.at(1000), 50.0);
    EXPECT_NO_THROW(g.validate());
    EXPECT_THROW((TimeGrid{0.0, 0.0, 10}).validate(), DomainError);
    EXPECT_THROW((TimeGrid{-1.0, 1.0, 10}).validate(), DomainError);
    EXPECT_THROW((TimeGrid{0.0, 1.0, 1}).validate(), DomainError);
    EXPECT_TRUE(default_grid() == g);
}

TEST(Kernel, ParseAndName) {
    EXPECT_EQ(parse_kernel("milburn"), Kernel::milburn);
    EXPECT_EQ(parse_kernel("von-neumann"), Kernel::von_neumann);
    EXPECT_EQ(to_string(Kernel::von_neumann), "von-neumann");
    EXPECT_THROW(parse_kernel("lindblad"), DomainError);
}

TEST(TimeSeries, UncoupledRunIsVacuum) {
    const auto run = time_series({1.0, 0.7, 0.0, 10.0}, {0.0, 20.0, 101}, Kernel::milburn);
    ASSERT_EQ(run.records.size(), 101u);
    for (const auto& r : run.records) {
        EXPECT_EQ(r.N1, 0.0);
        EXPECT_EQ(r.N2, 0.0);
        EXPECT_EQ(r.E_N, 0.0);
        EXPECT_EQ(r.purity, 1.0);
    }
}

TEST(TimeSeries, ValidatesBeforeEvolving) {
    EXPECT_THROW(time_series({1.0, 0.5, 0.6, 10.0}, default_grid(), Kernel::milburn), InstabilityError);
    EXPECT_THROW(time_series({1.0, 0.5, 0.2, 10.0}, {0.0, 1.0, 1}, Kernel::milburn), DomainError);
}

TEST(TimeSeries, VonNeumannIsotropicOccupation) {
    const SystemParams p{1.0, 1.0, 0.3, 1.0};
    const auto run = time_series(p, {0.0, 40.0, 401}, Kernel::von_neumann);
    const auto& m = run.modes;
    const double a = std::cosh(m.s1) * std::sinh(m.s1), b = std::cosh(m.s2) * std::sinh(m.s2);
    for (const auto& r : run.records) {
        const double expected = a * a * (1.0 - std::cos(2.0 * m.Omega1 * r.t)) + b * b * (1.0 - std::cos(2.0 * m.Omega2 * r.t));
        ASSERT_NEAR(r.N1, expected, 1e-12) << r.t;
        ASSERT_NEAR(r.purity, 1.0, 1e-10);
    }
    EXPECT_FALSE(run.flags.resonance);
    EXPECT_EQ(run.flags.kernel, Kernel::von_neumann);
}

TEST(TimeSeries, ResonanceFlag) {
    const auto modes = derive_modes({1.0, 0.5, 0.2, 1.0});
    const SystemParams p{1.0, 0.5, 0.2, modes.Omega1 / std::acos(-1.0)};
    EXPECT_TRUE(time_series(p, {0.0, 1.0, 3}, Kernel::milburn).flags.resonance);
}

TEST(Sweep, AxisParsing) {
    EXPECT_EQ(parse_axis("J"), SweepAxis::coupling);
    EXPECT_EQ(parse_axis("omega2"), SweepAxis::omega2);
    EXPECT_EQ(parse_axis("Gamma"), SweepAxis::gamma);
    EXPECT_THROW(parse_axis("omega1"), DomainError);
    const auto p = with_axis({1.0, 1.0, 0.2, 100.0}, SweepAxis::gamma, 5.0);
    EXPECT_EQ(p.gamma, 5.0);
    EXPECT_EQ(p.coupling, 0.2);
}

TEST(Sweep, RejectsNonMonotoneValues) {
    SweepSpec spec{{1.0, 0.5, 0.2, 100.0}, SweepAxis::coupling, {0.1, 0.3, 0.2}, {0.0, 1.0, 5}};
    EXPECT_THROW(parameter_sweep(spec, Kernel::milburn), DomainError);
    spec.values = {};
    EXPECT_THROW(parameter_sweep(spec, Kernel::milburn), DomainError);
    spec.values = {0.3, 0.2, 0.1};
    EXPECT_NO_THROW(parameter_sweep(spec, Kernel::milburn));
}

TEST(Sweep, UnstableCellsReportedAndOthersRun) {
    const SweepSpec spec{{1.0, 0.5, 0.2, 100.0}, SweepAxis::coupling, {0.1, 0.3, 0.5, 0.7}, {0.0, 5.0, 21}};
    const auto cells = parameter_sweep(spec, Kernel::milburn, 2);
    ASSERT_EQ(cells.size(), 4u);
    EXPECT_TRUE(cells[0].result.has_value());
    EXPECT_TRUE(cells[1].result.has_value());
    EXPECT_FALSE(cells[2].result.has_value());
    EXPECT_FALSE(cells[3].result.has_value());
    EXPECT_NE(cells[2].error.find("J < omega1*omega2"), std::string::npos) << cells[2].error;
    EXPECT_EQ(cells[1].params.coupling, 0.3);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
    const SweepSpec spec{{1.0, 0.6, 0.2, 30.0}, SweepAxis::gamma, {1.0, 3.0, 10.0, 30.0, 100.0}, {0.0, 10.0, 51}};
    const auto seq = parameter_sweep(spec, Kernel::milburn, 1);
    const auto par = parameter_sweep(spec, Kernel::milburn, 4);
    ASSERT_EQ(seq.size(), par.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        ASSERT_TRUE(seq[i].result && par[i].result);
        EXPECT_TRUE(seq[i].result->records == par[i].result->records) << i;
    }
}

TEST(Sweep, CsvIsDeterministicAcrossRuns) {
    const SystemParams p{1.0, 0.5, 0.35, 100.0};
    std::ostringstream a, b;
    write_csv(a, time_series(p, {0.0, 10.0, 201}, Kernel::milburn).records);
    write_csv(b, time_series(p, {0.0, 10.0, 201}, Kernel::milburn).records);
    EXPECT_EQ(a.str(), b.str());
}

TEST(RunParallel, VisitsEveryTaskOnce) {
    std::vector<int> hits(97, 0);
    run_parallel(hits.size(), 3, [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) EXPECT_EQ(h, 1);
    run_parallel(0, 4, [&](std::size_t) { FAIL(); });
}

TEST(Diagnostics, SyncIsZeroForIsotropicRuns) {
    const auto run = time_series({1.0, 1.0, 0.2, 100.0}, {0.0, 20.0, 201}, Kernel::milburn);
    EXPECT_LE(sync_diagnostic(run), 1e-12);
}

TEST(Diagnostics, SyncPositiveForDetunedRuns) {
    const auto run = time_series({1.0, 0.5, 0.2, 100.0}, {0.0, 20.0, 201}, Kernel::milburn);
    EXPECT_GT(sync_diagnostic(run), 0.05);
    RunResult empty;
    EXPECT_THROW(sync_diagnostic(empty), DomainError);
}

TEST(Diagnostics, KernelDistanceShrinksWithGamma) {
    const TimeGrid g{0.0, 50.0, 501};
    const double d10 = milburn_vs_vonneumann_distance({1.0, 1.0, 0.3, 10.0}, g);
    const double d1000 = milburn_vs_vonneumann_distance({1.0, 1.0, 0.3, 1000.0}, g);
    EXPECT_GT(d10, d1000);
    EXPECT_LE(milburn_vs_vonneumann_distance({1.0, 1.0, 0.3, 1e8}, g), 1e-6);
}

TEST(Diagnostics, TimeAverageTrapezoid) {
    RunResult r;
    for (int i = 0; i <= 4; ++i) {
        CorrelationRecord c;
        c.t = i;
        c.N1 = 2.0 * i;  // linear: average over [0, 4] is 4
        r.records.push_back(c);
    }
    EXPECT_DOUBLE_EQ(time_average(r, &CorrelationRecord::N1), 4.0);
    r.records.resize(1);
    EXPECT_THROW(time_average(r, &CorrelationRecord::N1), DomainError);
}

TEST(Presets, Shapes) {
    const auto fig4 = figure_preset("fig4");
    ASSERT_EQ(fig4.size(), 12u);
    EXPECT_EQ(fig4[0].label, "J0p2_milburn");
    EXPECT_EQ(fig4[1].kernel, Kernel::von_neumann);
    for (const auto& c : fig4) EXPECT_NO_THROW(validate(c.params));
    const auto an = figure_preset("anisotropy");
    ASSERT_EQ(an.size(), 6u);
    EXPECT_EQ(an.back().params.omega2, 0.21);
    for (const auto& c : an) EXPECT_NO_THROW(validate(c.params));
    const auto co = figure_preset("coupling");
    ASSERT_EQ(co.size(), 5u);
    for (const auto& c : co) EXPECT_NO_THROW(validate(c.params));
    EXPECT_THROW(figure_preset("fig9"), UnknownPresetError);
}
