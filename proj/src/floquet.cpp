#include "pgband/floquet.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"

namespace pgband {

namespace {

std::string format_theta(const Eigen::VectorXd& theta)
{
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (Eigen::Index i = 0; i < theta.size(); ++i) os << (i ? "," : "") << theta(i);
    os << ")";
    return os.str();
}

Eigen::VectorXd fiber_spectrum(const PeriodicGraph& graph, const Eigen::VectorXd& theta)
{
    try {
        return eigenvalues(assemble_fiber(graph, theta));
    } catch (const EigenError& e) {
        throw EigenError(std::string(e.what()) + " at theta=" + format_theta(theta));
    }
}

}  // namespace

HermitianMatrixd assemble_laplacian(const PeriodicGraph& graph, const Eigen::Ref<const Eigen::VectorXd>& theta)
{
    if (theta.size() != graph.dimension)
        throw std::invalid_argument("quasimomentum has " + std::to_string(theta.size()) +
                                    " components, dimension is " + std::to_string(graph.dimension));
    const auto nu = static_cast<Eigen::Index>(graph.num_classes());
    HermitianMatrixd::Dense m = HermitianMatrixd::Dense::Zero(nu, nu);
    const auto profile = degrees(graph);
    for (Eigen::Index j = 0; j < nu; ++j) m(j, j) = profile.kappa[static_cast<std::size_t>(j)];
    for (const auto& edge : graph.edges) {
        const double phase = edge.index.cast<double>().dot(theta);
        const std::complex<double> w = std::polar(1.0, phase);
        const auto j = static_cast<Eigen::Index>(edge.from);
        const auto k = static_cast<Eigen::Index>(edge.to);
        if (j == k) {
            m(j, j) -= 2.0 * std::cos(phase);
        } else {
            // Oriented lift (j,k) carries tau, its reverse (k,j) carries -tau.
            const auto a = std::min(j, k);
            const auto b = std::max(j, k);
            m(a, b) -= (a == j) ? w : std::conj(w);
        }
    }
    return HermitianMatrixd(m);
}

HermitianMatrixd assemble_fiber(const PeriodicGraph& graph, const Eigen::Ref<const Eigen::VectorXd>& theta)
{
    const Eigen::VectorXd q = graph.potentials();
    return assemble_laplacian(graph, theta) + HermitianMatrixd(q.cast<std::complex<double>>().asDiagonal().toDenseMatrix());
}

TorusGrid::TorusGrid(int dimension, int points_per_dim) : dimension_(dimension), points_per_dim_(points_per_dim)
{
    if (dimension < 1) throw std::invalid_argument("torus grid: dimension must be >= 1");
    if (points_per_dim < 2 || points_per_dim % 2 != 0)
        throw std::invalid_argument("torus grid: points per dimension must be even and >= 2, got " +
                                    std::to_string(points_per_dim));
    size_ = 1;
    for (int i = 0; i < dimension; ++i) size_ *= static_cast<std::size_t>(points_per_dim);
}

Quasimomentum TorusGrid::point(std::size_t flat_index) const
{
    Quasimomentum theta(dimension_);
    const double step = 2.0 * std::numbers::pi / points_per_dim_;
    for (int i = dimension_ - 1; i >= 0; --i) {
        theta(i) = step * static_cast<double>(flat_index % static_cast<std::size_t>(points_per_dim_));
        flat_index /= static_cast<std::size_t>(points_per_dim_);
    }
    return theta;
}

BandTable sample_bands(const PeriodicGraph& graph, const TorusGrid& grid, const SampleOptions& options)
{
    if (grid.dimension() != graph.dimension) throw std::invalid_argument("torus grid dimension mismatch");
    require_valid(graph);
    const auto nu = static_cast<Eigen::Index>(graph.num_classes());
    BandTable table{grid, Eigen::MatrixXd(nu, static_cast<Eigen::Index>(grid.size())), {}, {}, {}, {}};

    detail::parallel_for(grid.size(), options.threads, [&](std::size_t m) {
        table.values.col(static_cast<Eigen::Index>(m)) = fiber_spectrum(graph, grid.point(m));
    });

    table.lo.resize(nu);
    table.hi.resize(nu);
    table.argmin.assign(static_cast<std::size_t>(nu), 0);
    table.argmax.assign(static_cast<std::size_t>(nu), 0);
    for (Eigen::Index n = 0; n < nu; ++n) {
        Eigen::Index imin = 0, imax = 0;
        table.lo(n) = table.values.row(n).minCoeff(&imin);
        table.hi(n) = table.values.row(n).maxCoeff(&imax);
        table.argmin[static_cast<std::size_t>(n)] = static_cast<std::size_t>(imin);
        table.argmax[static_cast<std::size_t>(n)] = static_cast<std::size_t>(imax);
    }

    if (options.refine) {
        std::set<std::size_t> centers(table.argmin.begin(), table.argmin.end());
        centers.insert(table.argmax.begin(), table.argmax.end());
        constexpr int kFine = 8;
        const int side = 2 * kFine + 1;
        std::size_t per_center = 1;
        for (int i = 0; i < grid.dimension(); ++i) per_center *= static_cast<std::size_t>(side);
        const double fine_step = 2.0 * std::numbers::pi / grid.points_per_dim() / kFine;
        const std::vector<std::size_t> center_list(centers.begin(), centers.end());
        Eigen::MatrixXd extra(nu, static_cast<Eigen::Index>(center_list.size() * per_center));
        detail::parallel_for(extra.cols(), options.threads, [&](std::size_t s) {
            Quasimomentum theta = grid.point(center_list[s / per_center]);
            std::size_t r = s % per_center;
            for (int i = grid.dimension() - 1; i >= 0; --i) {
                theta(i) += fine_step * (static_cast<int>(r % side) - kFine);
                r /= side;
            }
            extra.col(static_cast<Eigen::Index>(s)) = fiber_spectrum(graph, theta);
        });
        if (extra.cols() > 0) {
            table.lo = table.lo.cwiseMin(extra.rowwise().minCoeff());
            table.hi = table.hi.cwiseMax(extra.rowwise().maxCoeff());
        }
    }
    return table;
}

double BandIntervals::total_length() const
{
    double total = 0.0;
    for (const auto& b : bands) total += b.length();
    return total;
}

BandIntervals band_intervals(const BandTable& table, double flat_tol)
{
    BandIntervals out;
    for (Eigen::Index n = 0; n < table.num_bands(); ++n) {
        const Interval band{table.lo(n), table.hi(n)};
        out.bands.push_back(band);
        out.flat_candidate.push_back(band.length() <= flat_tol * std::max(1.0, std::abs(band.hi)));
    }
    out.gaps = uncovered_gaps(out.bands);
    return out;
}

BandPath band_path(const PeriodicGraph& graph, std::span<const Quasimomentum> waypoints, int steps)
{
    if (steps < 1) throw std::invalid_argument("band_path: steps must be >= 1");
    if (waypoints.size() < 2) throw std::invalid_argument("band_path: need at least two waypoints");
    for (const auto& w : waypoints)
        if (w.size() != graph.dimension) throw std::invalid_argument("band_path: waypoint dimension mismatch");
    require_valid(graph);

    const auto rows = static_cast<Eigen::Index>(steps * (waypoints.size() - 1) + 1);
    BandPath path{Eigen::VectorXd(rows), Eigen::MatrixXd(rows, graph.dimension),
                  Eigen::MatrixXd(rows, static_cast<Eigen::Index>(graph.num_classes()))};
    Eigen::Index row = 0;
    double s = 0.0;
    for (std::size_t leg = 0; leg + 1 < waypoints.size(); ++leg) {
        const Quasimomentum& a = waypoints[leg];
        const Quasimomentum& b = waypoints[leg + 1];
        const double leg_length = (b - a).norm();
        for (int k = (leg == 0 ? 0 : 1); k <= steps; ++k) {
            const double t = static_cast<double>(k) / steps;
            const Quasimomentum theta = a + t * (b - a);
            path.arclength(row) = s + t * leg_length;
            path.theta.row(row) = theta.transpose();
            path.lambda.row(row) = fiber_spectrum(graph, theta).transpose();
            ++row;
        }
        s += leg_length;
    }
    return path;
}

}  // namespace pgband
