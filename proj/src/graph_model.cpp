#include "pgband/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace pgband {

namespace {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

std::string describe_edge(const PeriodicGraph& graph, std::size_t e)
{
    std::ostringstream os;
    os << "edge " << e;
    const auto& edge = graph.edges[e];
    auto name = [&](std::size_t c) { return c < graph.classes.size() ? graph.classes[c].id : std::to_string(c); };
    os << " (" << name(edge.from) << " -> " << name(edge.to) << ")";
    return os.str();
}

std::string join_factors(const std::vector<std::int64_t>& f)
{
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
    os << ")";
    return os.str();
}

// Locates the entry of smallest nonzero magnitude in the trailing submatrix.
bool find_pivot(const IntMatrix& a, Eigen::Index t, Eigen::Index& pr, Eigen::Index& pc)
{
    std::int64_t best = 0;
    for (Eigen::Index r = t; r < a.rows(); ++r)
        for (Eigen::Index c = t; c < a.cols(); ++c) {
            const std::int64_t v = a(r, c) < 0 ? -a(r, c) : a(r, c);
            if (v != 0 && (best == 0 || v < best)) {
                best = v;
                pr = r;
                pc = c;
            }
        }
    return best != 0;
}

}  // namespace

Eigen::VectorXd PeriodicGraph::potentials() const
{
    Eigen::VectorXd q(classes.size());
    for (std::size_t j = 0; j < classes.size(); ++j) q(static_cast<Eigen::Index>(j)) = classes[j].potential;
    return q;
}

std::size_t PeriodicGraph::class_position(const std::string& id) const
{
    for (std::size_t j = 0; j < classes.size(); ++j)
        if (classes[j].id == id) return j;
    throw GraphError("unknown class id '" + id + "'");
}

void check_structure(const PeriodicGraph& graph)
{
    if (graph.dimension < 1) throw GraphError("dimension must be >= 1, got " + std::to_string(graph.dimension));
    if (graph.classes.empty()) throw GraphError("empty class list");
    std::unordered_set<std::string> seen;
    for (const auto& c : graph.classes) {
        if (!seen.insert(c.id).second) throw GraphError("duplicate class id '" + c.id + "'");
        if (!std::isfinite(c.potential)) throw GraphError("non-finite potential at class '" + c.id + "'");
    }
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const auto& edge = graph.edges[e];
        if (edge.from >= graph.classes.size() || edge.to >= graph.classes.size())
            throw GraphError(describe_edge(graph, e) + ": unknown class");
        if (edge.index.size() != graph.dimension)
            throw GraphError(describe_edge(graph, e) + ": index length " + std::to_string(edge.index.size()) +
                             " != dimension " + std::to_string(graph.dimension));
    }
}

DegreeProfile degrees(const PeriodicGraph& graph)
{
    DegreeProfile out;
    out.kappa.assign(graph.num_classes(), 0);
    out.loops2.assign(graph.num_classes(), 0);
    for (const auto& edge : graph.edges) {
        // Both oriented lifts of a self-class edge start at the same class.
        out.kappa[edge.from] += 1;
        out.kappa[edge.to] += 1;
        if (edge.is_loop()) out.loops2[edge.from] += 2;
    }
    out.kappa_plus = out.kappa.empty() ? 0 : *std::max_element(out.kappa.begin(), out.kappa.end());
    return out;
}

std::vector<std::int64_t> smith_invariant_factors(const IntMatrix& matrix)
{
    IntMatrix a = matrix;
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    const Eigen::Index k = std::min(m, n);
    std::vector<std::int64_t> diag(static_cast<std::size_t>(k), 0);

    for (Eigen::Index t = 0; t < k; ++t) {
        Eigen::Index pr = t, pc = t;
        if (!find_pivot(a, t, pr, pc)) break;
        a.row(t).swap(a.row(pr));
        a.col(t).swap(a.col(pc));
        for (;;) {
            bool dirty = false;
            for (Eigen::Index r = t + 1; r < m; ++r) {
                if (a(r, t) == 0) continue;
                const std::int64_t f = a(r, t) / a(t, t);
                a.row(r) -= f * a.row(t);
                if (a(r, t) != 0) dirty = true;
            }
            for (Eigen::Index c = t + 1; c < n; ++c) {
                if (a(t, c) == 0) continue;
                const std::int64_t f = a(t, c) / a(t, t);
                a.col(c) -= f * a.col(t);
                if (a(t, c) != 0) dirty = true;
            }
            if (!dirty) {
                // Divisibility of the remaining block by the pivot.
                Eigen::Index bad_row = -1;
                for (Eigen::Index r = t + 1; r < m && bad_row < 0; ++r)
                    for (Eigen::Index c = t + 1; c < n; ++c)
                        if (a(r, c) % a(t, t) != 0) {
                            bad_row = r;
                            break;
                        }
                if (bad_row < 0) break;
                a.row(t) += a.row(bad_row);
            }
            // Move the smallest nonzero entry of row t / column t to the pivot.
            Eigen::Index br = t, bc = t;
            std::int64_t best = std::abs(a(t, t));
            for (Eigen::Index r = t + 1; r < m; ++r)
                if (a(r, t) != 0 && std::abs(a(r, t)) < best) {
                    best = std::abs(a(r, t));
                    br = r;
                    bc = t;
                }
            for (Eigen::Index c = t + 1; c < n; ++c)
                if (a(t, c) != 0 && std::abs(a(t, c)) < best) {
                    best = std::abs(a(t, c));
                    br = t;
                    bc = c;
                }
            a.row(t).swap(a.row(br));
            a.col(t).swap(a.col(bc));
        }
        diag[static_cast<std::size_t>(t)] = std::abs(a(t, t));
    }
    return diag;
}

bool CycleLattice::spans_full_lattice() const
{
    return std::all_of(invariant_factors.begin(), invariant_factors.end(), [](std::int64_t f) { return f == 1; });
}

CycleLattice cycle_lattice(const PeriodicGraph& graph, std::span<const std::size_t> edge_order)
{
    const std::size_t nu = graph.num_classes();
    const int d = graph.dimension;
    std::vector<std::size_t> order(edge_order.begin(), edge_order.end());
    if (order.empty()) {
        order.resize(graph.edges.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
    }

    // Spanning forest by union-find in the requested order.
    std::vector<std::size_t> parent(nu);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<bool> in_tree(graph.edges.size(), false);
    std::vector<std::vector<std::size_t>> adjacency(nu);
    for (std::size_t e : order) {
        const auto& edge = graph.edges[e];
        const std::size_t a = find(edge.from), b = find(edge.to);
        if (a == b) continue;
        parent[a] = b;
        in_tree[e] = true;
        adjacency[edge.from].push_back(e);
        adjacency[edge.to].push_back(e);
    }

    // Tree potential p with p(to) = p(from) + tau along tree edges.
    std::vector<LatticeVector> p(nu);
    std::vector<bool> seen(nu, false);
    for (std::size_t root = 0; root < nu; ++root) {
        if (seen[root]) continue;
        seen[root] = true;
        p[root] = LatticeVector::Zero(d);
        std::queue<std::size_t> queue;
        queue.push(root);
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop();
            for (std::size_t e : adjacency[u]) {
                const auto& edge = graph.edges[e];
                const bool forward = edge.from == u;
                const std::size_t v = forward ? edge.to : edge.from;
                if (seen[v]) continue;
                seen[v] = true;
                p[v] = forward ? LatticeVector(p[u] + edge.index) : LatticeVector(p[u] - edge.index);
                queue.push(v);
            }
        }
    }

    CycleLattice out;
    for (std::size_t e : order) {
        if (in_tree[e]) continue;
        const auto& edge = graph.edges[e];
        LatticeVector g = p[edge.from] + edge.index - p[edge.to];
        if (!g.isZero()) out.generators.push_back(std::move(g));
    }
    IntMatrix gen(static_cast<Eigen::Index>(out.generators.size()), d);
    for (std::size_t i = 0; i < out.generators.size(); ++i)
        gen.row(static_cast<Eigen::Index>(i)) = out.generators[i].cast<std::int64_t>().transpose();
    out.invariant_factors = smith_invariant_factors(gen);
    out.invariant_factors.resize(static_cast<std::size_t>(d), 0);
    return out;
}

std::string ValidationReport::reason() const
{
    if (valid()) return {};
    if (!dimension_ok) return "dimension must be >= 1";
    if (!multigraph_connected) return "fundamental graph is disconnected";
    if (!lattice_spans) {
        std::int64_t first = 0;
        for (std::int64_t f : lattice.invariant_factors)
            if (f != 1) {
                first = f;
                break;
            }
        return "periodic graph is disconnected: cycle lattice index " + std::to_string(first) +
               " (invariant factors " + join_factors(lattice.invariant_factors) + ")";
    }
    return "infinite degree";
}

ValidationReport validate(const PeriodicGraph& graph)
{
    check_structure(graph);
    ValidationReport report;
    report.dimension_ok = graph.dimension >= 1;

    std::vector<std::vector<std::size_t>> adjacency(graph.num_classes());
    for (const auto& edge : graph.edges) {
        adjacency[edge.from].push_back(edge.to);
        adjacency[edge.to].push_back(edge.from);
    }
    std::vector<bool> seen(graph.num_classes(), false);
    std::queue<std::size_t> queue;
    queue.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop();
        for (std::size_t v : adjacency[u])
            if (!seen[v]) {
                seen[v] = true;
                ++reached;
                queue.push(v);
            }
    }
    report.multigraph_connected = reached == graph.num_classes();
    report.lattice = cycle_lattice(graph);
    report.lattice_spans = report.lattice.spans_full_lattice();
    return report;
}

void require_valid(const PeriodicGraph& graph)
{
    const auto report = validate(graph);
    if (!report.valid()) throw GraphError(report.reason());
}

PeriodicGraph shift_gauge(const PeriodicGraph& graph, std::span<const LatticeVector> offsets)
{
    if (offsets.size() != graph.num_classes())
        throw GraphError("shift_gauge: " + std::to_string(offsets.size()) + " offsets for " +
                         std::to_string(graph.num_classes()) + " classes");
    for (const auto& m : offsets)
        if (m.size() != graph.dimension) throw GraphError("shift_gauge: offset length != dimension");
    PeriodicGraph out = graph;
    for (auto& edge : out.edges) edge.index += offsets[edge.to] - offsets[edge.from];
    return out;
}

Eigen::VectorXd sorted_potentials(const PeriodicGraph& graph)
{
    std::vector<double> q;
    q.reserve(graph.num_classes());
    for (const auto& c : graph.classes) q.push_back(c.potential);
    std::stable_sort(q.begin(), q.end());
    return Eigen::Map<Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()));
}

}  // namespace pgband
