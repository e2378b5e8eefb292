#ifndef PGBAND_FLOQUET_HPP
#define PGBAND_FLOQUET_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pgband/graph_model.hpp"
#include "pgband/hermitian.hpp"
#include "pgband/interval.hpp"

namespace pgband {

/// Point of the torus R^d / (2 pi Z)^d.
using Quasimomentum = Eigen::VectorXd;

/// Floquet matrix of the Laplacian: kappa_j delta_jk minus the sum of
/// exp(i <tau(e), theta>) over oriented fundamental edges e = (v_j, v_k).
HermitianMatrixd assemble_laplacian(const PeriodicGraph& graph, const Eigen::Ref<const Eigen::VectorXd>& theta);

/// Laplacian fiber plus diag(q).
HermitianMatrixd assemble_fiber(const PeriodicGraph& graph, const Eigen::Ref<const Eigen::VectorXd>& theta);

/// Uniform grid on the torus, theta_m = 2 pi m / N componentwise. N is even
/// so every corner point with components in {0, pi} is a grid point.
class TorusGrid {
public:
    TorusGrid(int dimension, int points_per_dim);

    int dimension() const { return dimension_; }
    int points_per_dim() const { return points_per_dim_; }
    std::size_t size() const { return size_; }
    Quasimomentum point(std::size_t flat_index) const;

private:
    int dimension_;
    int points_per_dim_;
    std::size_t size_;
};

struct SampleOptions {
    unsigned threads = 0;  ///< 0: THREADS environment variable, else hardware concurrency
    bool refine = false;   ///< rescan the neighbourhood of each band extremum at 8x resolution
};

/// Sampled band functions lambda_n(theta) on a torus grid.
struct BandTable {
    TorusGrid grid;
    Eigen::MatrixXd values;  ///< nu x grid.size(); column m is the sorted spectrum at grid.point(m)
    Eigen::VectorXd lo, hi;  ///< per-band extrema over all samples (grid and refinement)
    std::vector<std::size_t> argmin, argmax;  ///< grid point attaining lo / hi on the grid

    Eigen::Index num_bands() const { return values.rows(); }
};

BandTable sample_bands(const PeriodicGraph& graph, const TorusGrid& grid, const SampleOptions& options = {});

/// Band intervals sigma_n = [lambda_n^-, lambda_n^+] from a band table.
/// Sampled endpoints approximate the true band from inside.
struct BandIntervals {
    std::vector<Interval> bands;
    std::vector<bool> flat_candidate;
    std::vector<Interval> gaps;  ///< open intervals free of sampled spectrum

    double total_length() const;
};

BandIntervals band_intervals(const BandTable& table, double flat_tol = 1e-8);

struct BandPath {
    Eigen::VectorXd arclength;  ///< cumulative Euclidean length in theta
    Eigen::MatrixXd theta;      ///< rows x d
    Eigen::MatrixXd lambda;     ///< rows x nu
};

/// Spectra along the piecewise-linear path through `waypoints`, each leg
/// split into `steps` equal pieces: steps * (waypoints - 1) + 1 rows.
BandPath band_path(const PeriodicGraph& graph, std::span<const Quasimomentum> waypoints, int steps);

}  // namespace pgband

#endif  // PGBAND_FLOQUET_HPP
