#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pgband/floquet.hpp"
#include "test_support.hpp"

namespace pgband {
namespace {

using testing::fixture;
using testing::kPi;
using testing::kSqrt3;
using testing::random_graph;

PeriodicGraph with_potentials(PeriodicGraph g, double value)
{
    for (auto& c : g.classes) c.potential = value;
    return g;
}

TEST(AssembleLaplacian, MatchesHandWrittenThreeClassMatrix)
{
    const auto g = fixture("fig1.json");
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto theta = testing::random_theta(rng, 2);
        const auto delta = assemble_laplacian(g, theta);
        EXPECT_LE((delta.matrix() - testing::fig1_laplacian_by_hand(theta(0), theta(1))).norm(), 1e-13);
    }
}

TEST(AssembleLaplacian, SquareLatticeClosedForm)
{
    const auto g = fixture("square.json");
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto theta = testing::random_theta(rng, 2);
        const auto delta = assemble_laplacian(g, theta);
        ASSERT_EQ(delta.order(), 1);
        EXPECT_NEAR(delta(0, 0).real(), 4.0 - 2.0 * std::cos(theta(0)) - 2.0 * std::cos(theta(1)), 1e-14);
        EXPECT_EQ(delta(0, 0).imag(), 0.0);
    }
}

TEST(AssembleLaplacian, RowSumsVanishAtZero)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_graph(rng);
        const auto delta = assemble_laplacian(g, Eigen::VectorXd::Zero(g.dimension));
        const Eigen::VectorXcd sums = delta.matrix().rowwise().sum();
        for (Eigen::Index j = 0; j < sums.size(); ++j) EXPECT_EQ(sums(j), std::complex<double>(0.0, 0.0));
        const auto values = eigenvalues(delta);
        EXPECT_NEAR(values(0), 0.0, 1e-12);
    }
}

TEST(AssembleLaplacian, HermitianOnRandomGraphs)
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto g = random_graph(rng);
        const auto delta = assemble_laplacian(g, testing::random_theta(rng, g.dimension));
        EXPECT_EQ(delta.matrix(), delta.matrix().adjoint());
    }
}

TEST(AssembleLaplacian, RejectsWrongThetaLength)
{
    EXPECT_THROW(assemble_laplacian(fixture("fig1.json"), Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(AssembleFiber, ZeroPotentialIsLaplacian)
{
    const auto g = fixture("fig1.json");
    const Eigen::Vector2d theta(0.3, 1.7);
    EXPECT_EQ(assemble_fiber(g, theta).matrix(), assemble_laplacian(g, theta).matrix());
}

TEST(AssembleFiber, ConstantPotentialShiftsSpectrum)
{
    const auto g = fixture("fig1.json");
    const auto shifted = with_potentials(g, 5.0);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto theta = testing::random_theta(rng, 2);
        const Eigen::VectorXd diff = eigenvalues(assemble_fiber(shifted, theta)) - eigenvalues(assemble_fiber(g, theta));
        EXPECT_LE((diff.array() - 5.0).abs().maxCoeff(), 1e-12);
    }
}

TEST(AssembleFiber, EnvelopeAndGaugeInvariance)
{
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_graph(rng);
        const auto q_sorted = sorted_potentials(g);
        const int kappa_plus = degrees(g).kappa_plus;
        const auto shifted = shift_gauge(g, testing::random_offsets(rng, g));
        for (int s = 0; s < 10; ++s) {
            const auto theta = testing::random_theta(rng, g.dimension);
            const auto values = eigenvalues(assemble_fiber(g, theta));
            for (Eigen::Index n = 0; n < values.size(); ++n) {
                EXPECT_GE(values(n), q_sorted(n) - 1e-9);
                EXPECT_LE(values(n), q_sorted(n) + 2.0 * kappa_plus + 1e-9);
            }
            EXPECT_LE((values - eigenvalues(assemble_fiber(shifted, theta))).cwiseAbs().maxCoeff(), 1e-9);
        }
    }
}

TEST(TorusGrid, ContainsCornersAndRejectsOddSizes)
{
    const TorusGrid grid(2, 4);
    EXPECT_EQ(grid.size(), 16u);
    EXPECT_EQ(grid.point(0), Eigen::Vector2d::Zero());
    EXPECT_NEAR(grid.point(2 * 4 + 2)(0), kPi, 1e-15);
    EXPECT_NEAR(grid.point(2 * 4 + 2)(1), kPi, 1e-15);
    EXPECT_THROW(TorusGrid(2, 3), std::invalid_argument);
    EXPECT_THROW(TorusGrid(2, 0), std::invalid_argument);
}

TEST(SampleBands, SquareLatticeCoarseGrid)
{
    const auto table = sample_bands(fixture("square.json"), TorusGrid(2, 4));
    ASSERT_EQ(table.values.rows(), 1);
    ASSERT_EQ(table.values.cols(), 16);
    for (Eigen::Index m = 0; m < 16; ++m) {
        const auto theta = table.grid.point(static_cast<std::size_t>(m));
        EXPECT_NEAR(table.values(0, m), 4.0 - 2.0 * std::cos(theta(0)) - 2.0 * std::cos(theta(1)), 1e-12);
    }
    EXPECT_NEAR(table.lo(0), 0.0, 1e-12);
    EXPECT_NEAR(table.hi(0), 8.0, 1e-12);
}

TEST(SampleBands, ThreeClassCornersOnly)
{
    const auto table = sample_bands(fixture("fig1.json"), TorusGrid(2, 2));
    const Eigen::Vector3d lo(0.0, 6.0 - 2.0 * kSqrt3, 6.0);
    const Eigen::Vector3d hi(2.0, 4.0, 6.0 + 2.0 * kSqrt3);
    EXPECT_LE((table.lo - lo).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((table.hi - hi).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SampleBands, CornerSpectraMatchCharacteristicPolynomial)
{
    const auto g = fixture("fig1.json");
    for (double t1 : {0.0, kPi})
        for (double t2 : {0.0, kPi}) {
            const auto roots = testing::fig1_roots_by_bisection(std::cos(t1), std::cos(t2));
            const auto values = eigenvalues(assemble_laplacian(g, Eigen::Vector2d(t1, t2)));
            EXPECT_LE((values - roots).cwiseAbs().maxCoeff(), 1e-9) << t1 << "," << t2;
        }
}

TEST(SampleBands, ResultIndependentOfThreadCount)
{
    std::mt19937_64 rng(8);
    const auto g = random_graph(rng, {3, 5, {2}, 5.0});
    const TorusGrid grid(2, 16);
    const auto one = sample_bands(g, grid, {1, false});
    const auto many = sample_bands(g, grid, {7, false});
    EXPECT_EQ(one.values, many.values);
    EXPECT_EQ(one.lo, many.lo);
    EXPECT_EQ(one.hi, many.hi);
}

TEST(SampleBands, RejectsDisconnectedGraph)
{
    PeriodicGraph g;
    g.dimension = 1;
    g.classes.push_back({"v", 0.0});
    g.edges.push_back({0, 0, LatticeVector::Constant(1, 2)});
    EXPECT_THROW(sample_bands(g, TorusGrid(1, 4)), GraphError);
}

TEST(SampleBands, RefinementOnlyWidensInsideTheEnvelope)
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = random_graph(rng, {1, 4, {1, 2}, 3.0});
        const TorusGrid grid(g.dimension, 6);
        const auto plain = sample_bands(g, grid);
        const auto refined = sample_bands(g, grid, {0, true});
        const auto q_sorted = sorted_potentials(g);
        const int kp = degrees(g).kappa_plus;
        for (Eigen::Index n = 0; n < plain.lo.size(); ++n) {
            EXPECT_LE(refined.lo(n), plain.lo(n));
            EXPECT_GE(refined.hi(n), plain.hi(n));
            EXPECT_GE(refined.lo(n), q_sorted(n) - 1e-9);
            EXPECT_LE(refined.hi(n), q_sorted(n) + 2.0 * kp + 1e-9);
        }
    }
}

TEST(SampleBands, BipartiteSquareLatticeIsSymmetric)
{
    const auto table = sample_bands(fixture("square.json"), TorusGrid(2, 32));
    std::vector<double> values(table.values.data(), table.values.data() + table.values.size());
    std::vector<double> mirrored;
    for (double v : values) mirrored.push_back(8.0 - v);
    std::sort(values.begin(), values.end());
    std::sort(mirrored.begin(), mirrored.end());
    for (std::size_t i = 0; i < values.size(); ++i) EXPECT_NEAR(values[i], mirrored[i], 1e-9);
}

TEST(BandIntervals, ThreeClassGapsAtFineGrid)
{
    const auto bands = band_intervals(sample_bands(fixture("fig1.json"), TorusGrid(2, 64)));
    ASSERT_EQ(bands.gaps.size(), 2u);
    EXPECT_NEAR(bands.gaps[0].lo, 2.0, 1e-9);
    EXPECT_NEAR(bands.gaps[0].hi, 6.0 - 2.0 * kSqrt3, 1e-9);
    EXPECT_NEAR(bands.gaps[1].lo, 4.0, 1e-9);
    EXPECT_NEAR(bands.gaps[1].hi, 6.0, 1e-9);
    for (bool flat : bands.flat_candidate) EXPECT_FALSE(flat);
}

TEST(BandIntervals, SquareLatticeSingleBand)
{
    const auto bands = band_intervals(sample_bands(fixture("square.json"), TorusGrid(2, 32)));
    ASSERT_EQ(bands.bands.size(), 1u);
    EXPECT_NEAR(bands.bands[0].lo, 0.0, 1e-12);
    EXPECT_NEAR(bands.bands[0].hi, 8.0, 1e-12);
    EXPECT_TRUE(bands.gaps.empty());
}

TEST(BandIntervals, DegenerateTableIsFlat)
{
    BandTable table{TorusGrid(1, 2), Eigen::MatrixXd::Constant(3, 2, 1.5), Eigen::Vector3d::Constant(1.5),
                    Eigen::Vector3d::Constant(1.5), {0, 0, 0}, {0, 0, 0}};
    const auto bands = band_intervals(table);
    EXPECT_TRUE(bands.gaps.empty());
    for (bool flat : bands.flat_candidate) EXPECT_TRUE(flat);
    EXPECT_EQ(bands.bands[0], (Interval{1.5, 1.5}));
}

TEST(BandIntervals, StarDecorationsGiveFlatBands)
{
    const auto bands = band_intervals(sample_bands(fixture("star.json"), TorusGrid(2, 16)));
    EXPECT_FALSE(bands.flat_candidate[0]);
    EXPECT_TRUE(bands.flat_candidate[1]);
    EXPECT_TRUE(bands.flat_candidate[2]);
    EXPECT_NEAR(bands.bands[1].lo, 1.0, 1e-12);
}

TEST(Intervals, UncoveredGaps)
{
    const std::vector<Interval> closed{{5, 6}, {0, 2}, {1, 3}, {3, 4}};
    const auto gaps = uncovered_gaps(closed);
    ASSERT_EQ(gaps.size(), 1u);
    EXPECT_EQ(gaps[0], (Interval{4, 5}));
    EXPECT_TRUE(uncovered_gaps(std::vector<Interval>{}).empty());
}

TEST(BandPath, SquareLatticeDiagonal)
{
    const std::vector<Quasimomentum> waypoints{Eigen::Vector2d::Zero(), Eigen::Vector2d(kPi, kPi)};
    const auto path = band_path(fixture("square.json"), waypoints, 2);
    ASSERT_EQ(path.lambda.rows(), 3);
    EXPECT_NEAR(path.lambda(0, 0), 0.0, 1e-12);
    EXPECT_NEAR(path.lambda(1, 0), 4.0, 1e-12);
    EXPECT_NEAR(path.lambda(2, 0), 8.0, 1e-12);
    EXPECT_NEAR(path.arclength(2), std::sqrt(2.0) * kPi, 1e-12);
}

TEST(BandPath, RepeatedWaypointGivesConstantRows)
{
    const std::vector<Quasimomentum> waypoints{Eigen::Vector2d(0.4, 1.1), Eigen::Vector2d(0.4, 1.1)};
    const auto path = band_path(fixture("fig1.json"), waypoints, 5);
    ASSERT_EQ(path.lambda.rows(), 6);
    for (Eigen::Index r = 1; r < 6; ++r) EXPECT_EQ(path.lambda.row(r), path.lambda.row(0));
}

TEST(BandPath, EndpointsReproduceCornerSpectra)
{
    const std::vector<Quasimomentum> waypoints{Eigen::Vector2d::Zero(), Eigen::Vector2d(kPi, kPi), Eigen::Vector2d(kPi, 0)};
    const auto path = band_path(fixture("fig1.json"), waypoints, 8);
    ASSERT_EQ(path.lambda.rows(), 8 * 2 + 1);
    EXPECT_LE((path.lambda.row(0).transpose() - Eigen::Vector3d(0, 6 - 2 * kSqrt3, 6 + 2 * kSqrt3)).cwiseAbs().maxCoeff(),
              1e-12);
    EXPECT_LE((path.lambda.row(8).transpose() - Eigen::Vector3d(2, 4, 6)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BandPath, ArgumentErrors)
{
    const auto g = fixture("square.json");
    const std::vector<Quasimomentum> one{Eigen::Vector2d::Zero()};
    const std::vector<Quasimomentum> two{Eigen::Vector2d::Zero(), Eigen::Vector2d::Ones()};
    EXPECT_THROW(band_path(g, one, 4), std::invalid_argument);
    EXPECT_THROW(band_path(g, two, 0), std::invalid_argument);
}

}  // namespace
}  // namespace pgband
