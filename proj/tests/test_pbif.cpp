#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "levypop/pbif.hpp"

using namespace levypop;

namespace {

DensityField sampled(const Grid& g, double (*f)(double)) {
    DensityField d{g, std::vector<double>(g.n_cells), 0.0};
    for (std::size_t i = 0; i < g.n_cells; ++i) d.values[i] = f(g.node(i));
    d.normalize();
    return d;
}

SweepRecord record(double v, ShapeClass c) {
    SweepRecord r;
    r.parameter_name = "epsilon";
    r.parameter_value = v;
    ShapeClassification sc;
    sc.class_label = c;
    r.classification = sc;
    return r;
}

}  // namespace

TEST(FindModes, NormalBumpHasOneCentredMode) {
    const Grid g{-4.0, 4.0, 129};
    const auto d = sampled(g, [](double x) { return std::exp(-0.5 * x * x); });
    const auto m = find_modes(d);
    ASSERT_EQ(m.modes.size(), 1u);
    EXPECT_EQ(m.modes[0].location, g.node(64));
    EXPECT_EQ(m.class_label, ShapeClass::peaked_unimodal);
    EXPECT_EQ(to_string(m.class_label), "peaked-unimodal");
}

TEST(FindModes, ConstantIsFlat) {
    const Grid g{0.0, 1.0, 64};
    const auto m = find_modes(sampled(g, [](double) { return 1.0; }));
    EXPECT_TRUE(m.modes.empty());
    EXPECT_EQ(m.class_label, ShapeClass::flat);
}

TEST(FindModes, TwoBumpMixture) {
    const Grid g{-5.0, 5.0, 200};
    const auto d = sampled(g, [](double x) { return std::exp(-2.0 * (x - 2) * (x - 2)) + std::exp(-2.0 * (x + 2) * (x + 2)); });
    const auto m = find_modes(d);
    ASSERT_EQ(m.modes.size(), 2u);
    EXPECT_NEAR(m.modes[0].location, -2.0, g.dx());
    EXPECT_NEAR(m.modes[1].location, 2.0, g.dx());
    EXPECT_NEAR(m.modes[0].height, m.modes[1].height, 1e-12);
    EXPECT_EQ(m.class_label, ShapeClass::multimodal);
    EXPECT_LT(m.mode_location, 0.0);  // ties resolve to the smaller location
}

TEST(FindModes, InvariantUnderRescaling) {
    const Grid g{0.0, 3.0, 150};
    auto d = sampled(g, [](double x) { return x * std::exp(-2.0 * x) + 0.05 * std::exp(-20.0 * (x - 2) * (x - 2)); });
    const auto a = find_modes(d);
    for (double& v : d.values) v *= 37.0;
    const auto b = find_modes(d);
    ASSERT_EQ(a.modes.size(), b.modes.size());
    EXPECT_EQ(a.class_label, b.class_label);
    for (std::size_t i = 0; i < a.modes.size(); ++i) EXPECT_EQ(a.modes[i].location, b.modes[i].location);
}

TEST(FindModes, SmallRippleBelowProminenceIgnored) {
    const Grid g{0.0, 10.0, 200};
    const auto d = sampled(g, [](double x) { return std::exp(-(x - 5) * (x - 5)) * (1.0 + 0.01 * std::sin(20 * x)); });
    EXPECT_EQ(find_modes(d).modes.size(), 1u);
}

TEST(FindModes, WidePlateauIsFlat) {
    const Grid g{0.0, 10.0, 200};
    const auto d = sampled(g, [](double x) { return 1.0 + 0.2 * std::exp(-std::pow((x - 5) / 3.0, 2)); });
    EXPECT_EQ(find_modes(d).class_label, ShapeClass::flat);
}

TEST(FindModes, AllZeroThrows) {
    DensityField d{Grid{0.0, 1.0, 16}, std::vector<double>(16, 0.0), 0.0};
    EXPECT_THROW(find_modes(d), EmptyDensityError);
}

TEST(LocateTransition, Examples) {
    std::vector<SweepRecord> same{record(0.1, ShapeClass::peaked_unimodal), record(0.2, ShapeClass::peaked_unimodal)};
    EXPECT_FALSE(locate_transition(same).has_value());

    std::vector<SweepRecord> rs{record(0.1, ShapeClass::peaked_unimodal), record(0.2, ShapeClass::peaked_unimodal),
                                record(0.3, ShapeClass::flat), record(0.4, ShapeClass::flat)};
    const auto t = locate_transition(rs);
    ASSERT_TRUE(t.has_value());
    EXPECT_EQ(t->lower, 0.2);
    EXPECT_EQ(t->upper, 0.3);
    EXPECT_EQ(t->from, ShapeClass::peaked_unimodal);
    EXPECT_EQ(t->to, ShapeClass::flat);

    std::vector<SweepRecord> one{record(0.1, ShapeClass::flat)};
    SweepRecord failed;
    failed.parameter_value = 0.2;
    failed.error = "boom";
    one.push_back(failed);
    EXPECT_THROW(locate_transition(one), DomainError);
}

TEST(Sweep, FailedPointIsRecordedAndSweepContinues) {
    SweepSpec s;
    s.model = GrowthParams{1.0, 2.0, 1.0, 0.0, 0.2};
    s.parameter = "alpha";
    s.values = {1.0, 2.5};
    s.n_cells = 64;
    std::vector<double> seen;
    const auto recs = sweep_parameter(s, [&](double v, const FpeResult&) {
        seen.push_back(v);
        return std::string("p.csv");
    });
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_TRUE(recs[0].ok());
    EXPECT_EQ(recs[0].density_ref, "p.csv");
    EXPECT_FALSE(recs[1].ok());
    EXPECT_FALSE(recs[1].error.empty());
    EXPECT_EQ(seen, std::vector<double>{1.0});
}

TEST(Sweep, UnknownParameterAndOrdering) {
    SweepSpec s;
    s.model = LogisticParams{};
    s.parameter = "mu";
    s.values = {1.0};
    EXPECT_THROW(sweep_parameter(s), DomainError);
    s.parameter = "beta";
    s.values = {2.0, 1.0};
    EXPECT_THROW(sweep_parameter(s), DomainError);
}

TEST(Sweep, ApplyValueMapsMuThroughQ) {
    SweepSpec s;
    s.model = GrowthParams{2.0, 1.0, 1.0, 0.0, 0.0};
    s.parameter = "mu";
    const auto [m, a] = apply_sweep_value(s, 3.0);
    EXPECT_EQ(std::get<GrowthParams>(m).q, 6.0);
    EXPECT_EQ(a, 1.0);
}

TEST(Sweep, ModeLocationStableUnderRefinement) {
    const auto c = make_coefficients(GrowthParams{1.0, 2.0, 1.0, 0.0, 0.1});
    std::vector<double> loc;
    double coarse_dx = 0.0;
    for (std::size_t n : {256u, 512u}) {
        const Grid g{0.0, c.domain_hint, n};
        if (n == 256) coarse_dx = g.dx();
        loc.push_back(find_modes(evolve_fpe(c, 1.0, g, SolverConfig{}).density).mode_location);
    }
    EXPECT_LE(std::abs(loc[0] - loc[1]), coarse_dx);
}
