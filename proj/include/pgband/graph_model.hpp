#ifndef PGBAND_GRAPH_MODEL_HPP
#define PGBAND_GRAPH_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pgband {

/// Integer vector in the basis of lattice periods (an edge index or a
/// cell offset).
using LatticeVector = Eigen::VectorXi;

/// Structural defect in a periodic graph description (bad class reference,
/// wrong index length, empty class list, non-finite potential).
class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VertexClass {
    std::string id;
    double potential = 0.0;
};

/// Unoriented edge of the fundamental graph stored with one orientation.
/// The reverse orientation carries the negated index. An edge with
/// from == to and a nonzero index joins v to v + index and is not a loop.
struct FundamentalEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    LatticeVector index;

    bool is_loop() const { return from == to && index.isZero(); }
};

/// A Z^d-periodic graph given by its fundamental graph: vertex classes with
/// potentials and edges with integer index vectors.
struct PeriodicGraph {
    int dimension = 0;
    std::vector<VertexClass> classes;
    std::vector<FundamentalEdge> edges;

    std::size_t num_classes() const { return classes.size(); }
    Eigen::VectorXd potentials() const;
    /// Position of the class with the given id; throws GraphError if absent.
    std::size_t class_position(const std::string& id) const;
};

/// Throws GraphError describing the first structural defect, if any.
void check_structure(const PeriodicGraph& graph);

struct DegreeProfile {
    std::vector<int> kappa;   ///< per-class degree, loops counted twice
    std::vector<int> loops2;  ///< per class: 2 x number of index-zero loops
    int kappa_plus = 0;
};

DegreeProfile degrees(const PeriodicGraph& graph);

/// Integer lattice generated by the indices of the cycles of the
/// fundamental graph.
struct CycleLattice {
    std::vector<LatticeVector> generators;
    std::vector<std::int64_t> invariant_factors;  ///< length d, Smith diagonal
    bool spans_full_lattice() const;
};

/// Builds a spanning forest by scanning edges in `edge_order` (all edges in
/// stored order when empty) and collects one generator per non-tree edge.
CycleLattice cycle_lattice(const PeriodicGraph& graph, std::span<const std::size_t> edge_order = {});

struct ValidationReport {
    bool dimension_ok = false;
    bool multigraph_connected = false;
    bool lattice_spans = false;
    bool degrees_finite = true;
    CycleLattice lattice;

    bool valid() const { return dimension_ok && multigraph_connected && lattice_spans && degrees_finite; }
    /// Human-readable reason for invalidity; empty when valid.
    std::string reason() const;
};

/// Structural defects throw GraphError; connectivity is reported.
ValidationReport validate(const PeriodicGraph& graph);

/// Throws GraphError carrying validate(graph).reason() unless valid.
void require_valid(const PeriodicGraph& graph);

/// Re-anchors class j by the cell offset offsets[j]: every stored edge
/// (j, k, tau) becomes (j, k, tau + m_k - m_j).
PeriodicGraph shift_gauge(const PeriodicGraph& graph, std::span<const LatticeVector> offsets);

/// Class potentials in nondecreasing order (stable).
Eigen::VectorXd sorted_potentials(const PeriodicGraph& graph);

/// Invariant factors of an integer matrix (diagonal of its Smith normal
/// form), padded with zeros to min(rows, cols). Nonnegative, each dividing
/// the next.
std::vector<std::int64_t> smith_invariant_factors(
    const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& matrix);

}  // namespace pgband

#endif  // PGBAND_GRAPH_MODEL_HPP
