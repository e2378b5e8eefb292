#ifndef PGBAND_BRACKETING_HPP
#define PGBAND_BRACKETING_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "pgband/floquet.hpp"
#include "pgband/graph_model.hpp"
#include "pgband/hermitian.hpp"
#include "pgband/interval.hpp"

namespace pgband {

/// Finite graph built from the fundamental cell: the class representatives,
/// every index-zero edge, and one bridge per nonzero-index stored edge. The
/// bridge of stored edge (j, k, tau) runs from representative j to the
/// exterior vertex (k, tau).
///
/// Vertex order: the nu representatives in interior_order (inner classes
/// first), then exterior vertices in order of first appearance.
struct NeumannGraph {
    struct Vertex {
        std::size_t cls;      ///< original class position
        LatticeVector shift;  ///< zero for representatives
    };
    struct Edge {
        std::size_t a, b;  ///< vertex positions; a == b for loops
    };

    std::vector<std::size_t> interior_order;  ///< position i holds an original class
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<int> rho;     ///< per vertex
    std::vector<int> kappaN;  ///< per vertex, loops counted twice
    std::size_t nu = 0;
    std::size_t nu_D = 0;
    std::size_t nu_N = 0;
    int beta = 0;  ///< number of bridges of the periodic graph in this gauge

    /// rho of the class placed at interior position i.
    int class_rho(std::size_t i) const { return rho[i]; }
};

NeumannGraph build_neumann_graph(const PeriodicGraph& graph);

/// H_N = sqrt(rho_j rho_k) (kappa^N_j delta_jk - kappa^N_jk) + q^N_j delta_jk.
HermitianMatrixd build_neumann_operator(const NeumannGraph& ng, const PeriodicGraph& graph);

/// Leading nu_D x nu_D block of H_N (may be empty).
HermitianMatrixd build_dirichlet_operator(const NeumannGraph& ng, const PeriodicGraph& graph);

struct BracketSpectra {
    Eigen::VectorXd neumann;    ///< length nu_N
    Eigen::VectorXd dirichlet;  ///< length nu_D
};

BracketSpectra bracket_spectra(const NeumannGraph& ng, const PeriodicGraph& graph);

struct BracketIntervals {
    std::vector<Interval> J;
    std::vector<Interval> J_tilde;
};

/// Intervals J_n and J~_n. Throws std::out_of_range when the list lengths
/// are inconsistent with the counts.
BracketIntervals bracket_intervals(const BracketSpectra& spectra, const Eigen::VectorXd& q_sorted, int kappa_plus,
                                   std::size_t nu, std::size_t nu_D, std::size_t nu_N);

struct BandLengthEstimates {
    double est1 = 0.0;
    double est2 = 0.0;
};

BandLengthEstimates estimate_total_band_length(const NeumannGraph& ng, const BracketSpectra& spectra,
                                               const PeriodicGraph& graph);

struct BracketReport {
    BracketIntervals intervals;
    std::vector<std::optional<Interval>> J_cap;
    std::vector<bool> inclusion;
    std::vector<Interval> certified_gaps;
    BandLengthEstimates estimates;
    double total_band_length = 0.0;

    bool inclusion_ok() const;
    double certified_gap_length() const;
};

/// Absolute slack for the sampled-band inclusion verdicts, scaled by
/// max(1, |endpoint|).
inline constexpr double kInclusionTolerance = 1e-9;

BracketReport verify_and_certify(const BandIntervals& bands, const BracketIntervals& intervals,
                                 const BandLengthEstimates& estimates);

/// Everything computed from one gauge of a graph.
struct BracketAnalysis {
    NeumannGraph neumann;
    BracketSpectra spectra;
    BracketReport report;
};

BracketAnalysis bracket(const PeriodicGraph& graph, const BandIntervals& bands);

class GaugeBudgetError : public std::runtime_error {
public:
    GaugeBudgetError(std::size_t count);
    std::size_t count;
};

inline constexpr std::size_t kGaugeBudget = 100000;

struct GaugeSearchResult {
    std::vector<LatticeVector> offsets;
    BracketAnalysis analysis;
    std::size_t gauges_examined = 0;
};

/// Tries every per-class offset with components in [-radius, radius] and
/// keeps the gauge with the largest total certified gap length; ties go to
/// the lexicographically smallest offset tuple.
GaugeSearchResult gauge_search(const PeriodicGraph& graph, const BandIntervals& bands, int radius,
                               unsigned threads = 0);

}  // namespace pgband

#endif  // PGBAND_BRACKETING_HPP
