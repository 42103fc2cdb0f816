#include "rdlab/attractor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

using namespace rdlab;

namespace {

DomainSpec grid(int m = 63) { return DomainSpec{1, 1.0, m, EigenvalueConvention::continuum}; }

NonlinearitySpec chafee_infante(double beta) { return NonlinearitySpec{{0.0, -beta, 0.0, 1.0}, std::nullopt}; }

PointCloud random_cloud(const DomainSpec& d, std::size_t n, std::uint64_t seed) {
    std::vector<Field> s;
    for (std::size_t i = 0; i < n; ++i)
        s.push_back(ensemble_member(d, seed, i, 1.0));
    return PointCloud::from_states(std::move(s));
}

const std::vector<NormTag>& all_tags() {
    static const std::vector<NormTag> tags{NormTag::lebesgue(2.0), NormTag::lebesgue(4.0), NormTag::lebesgue(6.0),
                                           NormTag::h1()};
    return tags;
}

} // namespace

TEST(NormTag, Names) {
    EXPECT_EQ(NormTag::lebesgue(2.0).name(), "L2");
    EXPECT_EQ(NormTag::lebesgue(6.0).name(), "L6");
    EXPECT_EQ(NormTag::h1().name(), "H1");
    EXPECT_THROW(NormTag::lebesgue(0.5), ParameterError);
}

TEST(DistanceMatrix, MatchesDirectDistances) {
    const auto d = grid();
    const auto cloud = random_cloud(d, 12, 3);
    for (const auto& tag : all_tags()) {
        const DistanceMatrix m(cloud, tag);
        for (std::size_t i = 0; i < cloud.size(); ++i)
            for (std::size_t j = 0; j < cloud.size(); ++j) {
                const double direct = distance(cloud.states[i], cloud.states[j], tag);
                ASSERT_NEAR(m(i, j), direct, 1e-12 * (1.0 + direct));
                ASSERT_EQ(m(i, j), m(j, i));
            }
    }
}

TEST(EpsilonNet, LargeEpsGivesSingleton) {
    const auto cloud = random_cloud(grid(), 30, 5);
    const DistanceMatrix m(cloud, NormTag::lebesgue(2.0));
    EXPECT_EQ(greedy_epsilon_net(m, m.diameter() * 1.0001).size(), 1u);
}

TEST(EpsilonNet, TinyEpsGivesWholeCloud) {
    const auto cloud = random_cloud(grid(), 30, 5);
    const DistanceMatrix m(cloud, NormTag::lebesgue(4.0));
    EXPECT_EQ(greedy_epsilon_net(m, 1e-12).size(), cloud.size());
}

TEST(EpsilonNet, CoveringAndSubsetProperty) {
    Rng rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const auto cloud = random_cloud(grid(31), 10 + trial, 100 + trial);
        const NormTag tag = all_tags()[trial % 4];
        const DistanceMatrix m(cloud, tag);
        const double eps = rng.uniform(0.01, 1.0) * m.diameter();
        const auto net = greedy_epsilon_net(m, eps);
        std::set<std::size_t> unique(net.indices.begin(), net.indices.end());
        ASSERT_EQ(unique.size(), net.size());
        for (std::size_t idx : net.indices)
            ASSERT_LT(idx, cloud.size());
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j : net.indices)
                best = std::min(best, distance(cloud.states[i], cloud.states[j], tag));
            ASSERT_LT(best, eps);
            ASSERT_LT(m(i, net.cover[i]), eps);
        }
    }
}

TEST(EpsilonNet, SizeNonIncreasingInEps) {
    const auto cloud = random_cloud(grid(), 80, 9);
    const DistanceMatrix m(cloud, NormTag::lebesgue(2.0));
    std::size_t previous = cloud.size() + 1;
    for (double eps : logspace(1e-3 * m.diameter(), m.diameter(), 25)) {
        const auto n = greedy_epsilon_net(m, eps).size();
        EXPECT_LE(n, previous);
        previous = n;
    }
}

TEST(EpsilonNet, TranslationPreservesNets) {
    // E is an eps-net of A iff E - x is an eps-net of A - x.
    const auto d = grid();
    const auto cloud = random_cloud(d, 40, 12);
    const Field x = ensemble_member(d, 77, 0, 3.0);
    const auto shifted = cloud.translated(x);
    for (const auto& tag : all_tags()) {
        const DistanceMatrix a(cloud, tag), b(shifted, tag);
        for (double frac : {0.2, 0.5, 0.8}) {
            const double eps = frac * a.diameter();
            const auto net = greedy_epsilon_net(a, eps);
            EXPECT_TRUE(covers(b, net.indices, eps));
            EXPECT_EQ(greedy_epsilon_net(b, eps).indices, net.indices);
        }
    }
}

TEST(EpsilonNet, RejectsNonPositiveEps) {
    const DistanceMatrix m(random_cloud(grid(), 3, 1), NormTag::lebesgue(2.0));
    EXPECT_THROW(greedy_epsilon_net(m, 0.0), ParameterError);
}

TEST(Transport, SingletonCloudIsCovered) {
    const auto d = grid();
    const ProblemSpec prob(1.0, chafee_infante(1.0), d);
    const auto cloud = PointCloud::from_states({eigenmode(d, 1)});
    const auto net = greedy_epsilon_net(cloud, 0.1, NormTag::lebesgue(2.0));
    const auto r = transport_net(cloud, net, prob, 1.0, 0.5, NormTag::lebesgue(4.0), 1e-3);
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(r.coverage, 1.0);
}

TEST(Transport, HeatFlowContractionOracle) {
    // f = 0: ||M(a) - M(b)|| <= e^{-(lambda + pi^2)} ||a - b||.
    const auto d = grid();
    const ProblemSpec prob(1.0, NonlinearitySpec{{0.0}, std::nullopt}, d);
    const auto cloud = random_cloud(d, 25, 4);
    const auto net = greedy_epsilon_net(cloud, 0.5, NormTag::lebesgue(2.0));
    const auto r = transport_net(cloud, net, prob, 1.0, 1.0, NormTag::lebesgue(2.0), 1e-3);
    EXPECT_TRUE(r.pass());
    EXPECT_LE(r.worst_ratio, std::exp(-(1.0 + std::numbers::pi * std::numbers::pi)) * (1.0 + 1e-6));
    EXPECT_LT(r.max_target_distance, r.radius);
}

TEST(Transport, ReportsFalsifiedConstants) {
    const auto d = grid();
    const ProblemSpec prob(1.0, NonlinearitySpec{{0.0}, std::nullopt}, d);
    const auto cloud = random_cloud(d, 25, 4);
    const auto net = greedy_epsilon_net(cloud, 0.5, NormTag::lebesgue(2.0));
    ASSERT_LT(net.size(), cloud.size());
    const auto r = transport_net(cloud, net, prob, 1e-12, 1.0, NormTag::lebesgue(2.0), 1e-3);
    EXPECT_FALSE(r.pass());
    EXPECT_LT(r.coverage, 1.0);
    EXPECT_EQ(r.covered, net.size());
}

TEST(Transport, RequiresEpsAtMostOne) {
    const auto d = grid();
    const ProblemSpec prob(1.0, chafee_infante(1.0), d);
    const auto cloud = random_cloud(d, 3, 4);
    const auto net = greedy_epsilon_net(cloud, 2.0, NormTag::lebesgue(2.0));
    EXPECT_THROW(transport_net(cloud, net, prob, 1.0, 0.5, NormTag::lebesgue(4.0), 1e-3), PreconditionError);
}

TEST(CorrelationDimension, LineSegmentOracle) {
    const auto d = grid(127);
    const auto cloud = line_segment_cloud(eigenmode(d, 1) + 0.5 * eigenmode(d, 3), 800, 3);
    for (const auto& tag : all_tags()) {
        const auto est = correlation_dimension(cloud, tag);
        EXPECT_NEAR(est.dimension, 1.0, 0.15) << tag.name();
        EXPECT_GE(est.window_end - est.window_begin, 5u);
        EXPECT_FALSE(est.small_sample);
    }
}

TEST(CorrelationDimension, TorusOracle) {
    const auto cloud = torus_cloud(grid(127), 800, 5);
    for (const auto& tag : {NormTag::lebesgue(2.0), NormTag::h1()}) {
        const auto est = correlation_dimension(cloud, tag);
        EXPECT_NEAR(est.dimension, 2.0, 0.2) << tag.name();
    }
}

TEST(CorrelationDimension, DegenerateAndTwoPointClouds) {
    const auto d = grid();
    const auto same = PointCloud::from_states({eigenmode(d, 1), eigenmode(d, 1), eigenmode(d, 1)});
    const auto est = correlation_dimension(same, NormTag::lebesgue(2.0));
    EXPECT_TRUE(est.degenerate);
    EXPECT_EQ(est.dimension, 0.0);
    const auto two = PointCloud::from_states({eigenmode(d, 1), eigenmode(d, 2)});
    const auto e2 = correlation_dimension(two, NormTag::lebesgue(2.0));
    EXPECT_EQ(e2.dimension, 0.0);
    EXPECT_TRUE(e2.small_sample);
}

TEST(CorrelationDimension, TranslationInvariant) {
    const auto d = grid(127);
    const auto cloud = torus_cloud(d, 500, 9);
    const Field z0 = ensemble_member(d, 4, 1, 2.0);
    for (const auto& tag : all_tags()) {
        const auto a = correlation_dimension(cloud, tag);
        const auto b = correlation_dimension(cloud.translated(z0), tag);
        EXPECT_NEAR(a.dimension, b.dimension, 1e-12) << tag.name();
    }
}

TEST(DimensionBound, SinglePointAttractor) {
    const auto d = grid();
    const auto cloud = PointCloud::from_states({Field(d)});
    const auto r = dimension_bound_check(cloud, 4.0, 4.0, Field(d));
    EXPECT_TRUE(r.degenerate);
    EXPECT_TRUE(r.pass);
    for (const auto& b : r.bounds)
        EXPECT_EQ(b.lhs, 0.0);
}

TEST(DimensionBound, TorusSatisfiesBounds) {
    const auto d = grid(63);
    const auto r = dimension_bound_check(torus_cloud(d, 500, 2), 4.0, 6.0, eigenmode(d, 1));
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.bounds.size(), 3u);
}

TEST(SampleAttractor, StableOriginCollapses) {
    // lambda + pi^2 - beta > 0: the attractor is {0}.
    const auto d = grid();
    const ProblemSpec prob(1.0, chafee_infante(5.0), d);
    AttractorSampling s;
    s.ensemble_size = 4;
    s.t_spin = 4.0;
    s.n_samples = 3;
    s.dt = 1e-3;
    const auto cloud = sample_attractor(prob, s);
    ASSERT_EQ(cloud.size(), 12u);
    for (const auto& u : cloud.states)
        EXPECT_LT(l2_norm(u), 1e-6);
    EXPECT_TRUE(cloud.spin_up_stabilized);
}

TEST(SampleAttractor, SingleMemberAndDeterminism) {
    const auto d = grid();
    const ProblemSpec prob(1.0, chafee_infante(12.0), d);
    AttractorSampling s;
    s.ensemble_size = 1;
    s.t_spin = 1.0;
    s.n_samples = 5;
    s.sample_spacing = 0.25;
    s.dt = 1e-3;
    const auto a = sample_attractor(prob, s);
    const auto b = sample_attractor(prob, s);
    ASSERT_EQ(a.size(), 5u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.states[i], b.states[i]);
        EXPECT_DOUBLE_EQ(a.times[i], 1.0 + 0.25 * i);
    }
}

TEST(SampleAttractor, ChafeeInfanteCloudContainsBothEquilibria) {
    const auto d = grid();
    const ProblemSpec prob(1.0, chafee_infante(12.0), d);
    const auto eq = find_equilibrium(eigenmode(d, 1), prob);
    ASSERT_TRUE(eq.converged);
    ASSERT_GT(l2_norm(eq.state), 0.5);
    AttractorSampling s;
    s.ensemble_size = 12;
    s.n_samples = 30;
    s.dt = 1e-3;
    const auto cloud = sample_attractor(prob, s);
    double plus = 1e9, minus = 1e9;
    for (const auto& u : cloud.states) {
        plus = std::min(plus, l2_norm(u - eq.state));
        minus = std::min(minus, l2_norm(u + eq.state));
    }
    EXPECT_LT(plus, 1e-3);
    EXPECT_LT(minus, 1e-3);
    EXPECT_GT(DistanceMatrix(cloud, NormTag::lebesgue(2.0)).diameter(), 1.0);

    // Bundle started on the cloud: distance zero at t = 0.
    std::vector<Trajectory> bundle;
    for (std::size_t i : {0u, 7u})
        bundle.push_back(solve(cloud.states[i], prob, SolverConfig{1e-3, 1.0, Scheme::imex_cn_ab2, 250}));
    const auto series = attraction_distance(bundle, cloud, NormTag::lebesgue(6.0));
    EXPECT_EQ(series.front().dist, 0.0);
    EXPECT_EQ(series.size(), 5u);
    EXPECT_THROW(attraction_distance(bundle, cloud, NormTag::h1()), PreconditionError);
    CertificationReport cert;
    cert.pass = true;
    EXPECT_EQ(attraction_distance(bundle, cloud, NormTag::h1(), &cert).front().dist, 0.0);
}

TEST(SettlingTime, TailBelowThreshold) {
    const std::vector<DistancePoint> s{{0, 1.0}, {1, 1e-4}, {2, 1e-2}, {3, 1e-4}, {4, 1e-5}};
    EXPECT_EQ(settling_time(s, 1e-3), 3.0);
    EXPECT_TRUE(std::isnan(settling_time(s, 1e-6)));
}
