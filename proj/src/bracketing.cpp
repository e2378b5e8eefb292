#include "pgband/bracketing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "parallel.hpp"

namespace pgband {

namespace {

using ExteriorKey = std::pair<std::size_t, std::vector<int>>;

double scaled_tolerance(double tol, double a, double b)
{
    return tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// 1-based access into a spectrum, as the interval formulas are written.
double at1(const Eigen::VectorXd& v, std::size_t n, const char* what)
{
    if (n < 1 || n > static_cast<std::size_t>(v.size()))
        throw std::out_of_range(std::string("bracket_intervals: ") + what + " index " + std::to_string(n) +
                                " outside 1.." + std::to_string(v.size()));
    return v(static_cast<Eigen::Index>(n - 1));
}

}  // namespace

NeumannGraph build_neumann_graph(const PeriodicGraph& graph)
{
    require_valid(graph);
    const std::size_t nu = graph.num_classes();
    const auto profile = degrees(graph);

    // Exterior vertices keyed by (class, shift), in order of first appearance.
    std::map<ExteriorKey, std::size_t> exterior_of;
    std::vector<ExteriorKey> exteriors;
    std::vector<int> rep_kappa(nu, 0);
    std::size_t bridges = 0;
    for (const auto& edge : graph.edges) {
        if (edge.index.isZero()) {
            rep_kappa[edge.from] += 1;
            rep_kappa[edge.to] += 1;
            continue;
        }
        ++bridges;
        rep_kappa[edge.from] += 1;
        ExteriorKey key{edge.to, std::vector<int>(edge.index.data(), edge.index.data() + edge.index.size())};
        if (exterior_of.emplace(key, exteriors.size()).second) exteriors.push_back(std::move(key));
    }

    NeumannGraph ng;
    ng.nu = nu;
    ng.beta = static_cast<int>(2 * bridges);
    for (std::size_t j = 0; j < nu; ++j)
        if (rep_kappa[j] == profile.kappa[j]) ng.interior_order.push_back(j);
    ng.nu_D = ng.interior_order.size();
    for (std::size_t j = 0; j < nu; ++j)
        if (rep_kappa[j] != profile.kappa[j]) ng.interior_order.push_back(j);
    ng.nu_N = nu + exteriors.size();

    std::vector<std::size_t> position_of(nu);
    for (std::size_t i = 0; i < nu; ++i) position_of[ng.interior_order[i]] = i;

    std::vector<int> class_rho(nu, 1);
    for (const auto& key : exteriors) class_rho[key.first] += 1;

    for (std::size_t i = 0; i < nu; ++i)
        ng.vertices.push_back({ng.interior_order[i], LatticeVector::Zero(graph.dimension)});
    for (const auto& key : exteriors)
        ng.vertices.push_back({key.first, Eigen::Map<const LatticeVector>(key.second.data(),
                                                                          static_cast<Eigen::Index>(key.second.size()))});

    ng.kappaN.assign(ng.nu_N, 0);
    for (const auto& edge : graph.edges) {
        const std::size_t a = position_of[edge.from];
        std::size_t b = position_of[edge.to];
        if (!edge.index.isZero()) {
            ExteriorKey key{edge.to, std::vector<int>(edge.index.data(), edge.index.data() + edge.index.size())};
            b = nu + exterior_of.at(key);
        }
        ng.edges.push_back({a, b});
        ng.kappaN[a] += 1;
        ng.kappaN[b] += 1;
    }

    ng.rho.resize(ng.nu_N);
    for (std::size_t v = 0; v < ng.nu_N; ++v) ng.rho[v] = class_rho[ng.vertices[v].cls];
    return ng;
}

HermitianMatrixd build_neumann_operator(const NeumannGraph& ng, const PeriodicGraph& graph)
{
    const auto n = static_cast<Eigen::Index>(ng.nu_N);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index v = 0; v < n; ++v) {
        const auto sv = static_cast<std::size_t>(v);
        h(v, v) = ng.rho[sv] * ng.kappaN[sv] + graph.classes[ng.vertices[sv].cls].potential;
    }
    for (const auto& e : ng.edges) {
        const auto a = static_cast<Eigen::Index>(e.a);
        const auto b = static_cast<Eigen::Index>(e.b);
        const double w = std::sqrt(static_cast<double>(ng.rho[e.a]) * ng.rho[e.b]);
        if (a == b) {
            h(a, a) -= 2.0 * w;  // a loop has multiplicity two in kappa^N_jj
        } else {
            h(a, b) -= w;
            h(b, a) -= w;
        }
    }
    return HermitianMatrixd(h.cast<std::complex<double>>());
}

HermitianMatrixd build_dirichlet_operator(const NeumannGraph& ng, const PeriodicGraph& graph)
{
    const auto d = static_cast<Eigen::Index>(ng.nu_D);
    return HermitianMatrixd(build_neumann_operator(ng, graph).matrix().topLeftCorner(d, d));
}

BracketSpectra bracket_spectra(const NeumannGraph& ng, const PeriodicGraph& graph)
{
    const auto hn = build_neumann_operator(ng, graph);
    const auto d = static_cast<Eigen::Index>(ng.nu_D);
    return {eigenvalues(hn), eigenvalues(HermitianMatrixd(hn.matrix().topLeftCorner(d, d)))};
}

BracketIntervals bracket_intervals(const BracketSpectra& spectra, const Eigen::VectorXd& q_sorted, int kappa_plus,
                                   std::size_t nu, std::size_t nu_D, std::size_t nu_N)
{
    if (static_cast<std::size_t>(spectra.neumann.size()) != nu_N ||
        static_cast<std::size_t>(spectra.dirichlet.size()) != nu_D ||
        static_cast<std::size_t>(q_sorted.size()) != nu || nu_D > nu || nu_N < nu)
        throw std::out_of_range("bracket_intervals: inconsistent counts (nu=" + std::to_string(nu) +
                                ", nu_D=" + std::to_string(nu_D) + ", nu_N=" + std::to_string(nu_N) + ")");
    const auto& lN = spectra.neumann;
    const auto& lD = spectra.dirichlet;
    BracketIntervals out;
    for (std::size_t n = 1; n <= nu; ++n) {
        const double upper_J = n <= nu_D ? at1(lD, n, "Dirichlet") : at1(q_sorted, n, "potential") + 2.0 * kappa_plus;
        out.J.push_back({at1(lN, n, "Neumann"), upper_J});
        const double lower_Jt = n <= nu - nu_D ? at1(q_sorted, n, "potential") : at1(lD, n + nu_D - nu, "Dirichlet");
        out.J_tilde.push_back({lower_Jt, at1(lN, n + nu_N - nu, "Neumann")});
    }
    return out;
}

BandLengthEstimates estimate_total_band_length(const NeumannGraph& ng, const BracketSpectra& spectra,
                                               const PeriodicGraph& graph)
{
    const auto profile = degrees(graph);
    const Eigen::VectorXd q_sorted = sorted_potentials(graph);
    const auto& lN = spectra.neumann;
    BandLengthEstimates out;

    for (std::size_t n = ng.nu_D; n < ng.nu; ++n) {
        const std::size_t cls = ng.interior_order[n];
        const double h = ng.rho[n] * (profile.kappa[cls] - profile.loops2[cls] + graph.classes[cls].potential);
        out.est1 += q_sorted(static_cast<Eigen::Index>(n)) + 2.0 * profile.kappa_plus - h;
    }
    for (std::size_t n = ng.nu; n < ng.nu_N; ++n) out.est1 += lN(static_cast<Eigen::Index>(n));

    const std::size_t boundary = ng.nu - ng.nu_D;
    for (std::size_t n = 0; n < boundary; ++n)
        out.est2 += lN(static_cast<Eigen::Index>(ng.nu_N - boundary + n)) - lN(static_cast<Eigen::Index>(n));
    return out;
}

bool BracketReport::inclusion_ok() const
{
    return std::all_of(inclusion.begin(), inclusion.end(), [](bool b) { return b; });
}

double BracketReport::certified_gap_length() const
{
    double total = 0.0;
    for (const auto& g : certified_gaps) total += g.length();
    return total;
}

BracketReport verify_and_certify(const BandIntervals& bands, const BracketIntervals& intervals,
                                 const BandLengthEstimates& estimates)
{
    if (bands.bands.size() != intervals.J.size() || intervals.J.size() != intervals.J_tilde.size())
        throw std::invalid_argument("verify_and_certify: band count " + std::to_string(bands.bands.size()) +
                                    " does not match bracket count " + std::to_string(intervals.J.size()));
    BracketReport report;
    report.intervals = intervals;
    report.estimates = estimates;
    report.total_band_length = bands.total_length();
    std::vector<Interval> caps;
    for (std::size_t n = 0; n < bands.bands.size(); ++n) {
        const Interval& J = intervals.J[n];
        const Interval& Jt = intervals.J_tilde[n];
        std::optional<Interval> cap = intersect(J, Jt);
        if (!cap) {
            const double lo = std::max(J.lo, Jt.lo);
            const double hi = std::min(J.hi, Jt.hi);
            // Rounding can separate endpoints that coincide exactly.
            if (lo - hi <= scaled_tolerance(kInclusionTolerance, lo, hi)) cap = Interval{hi, lo};
        }
        report.J_cap.push_back(cap);
        const Interval& band = bands.bands[n];
        report.inclusion.push_back(
            cap.has_value() && cap->contains(band, scaled_tolerance(kInclusionTolerance, band.lo, band.hi)));
        if (cap) caps.push_back(*cap);
    }
    report.certified_gaps = uncovered_gaps(caps);
    return report;
}

BracketAnalysis bracket(const PeriodicGraph& graph, const BandIntervals& bands)
{
    BracketAnalysis out;
    out.neumann = build_neumann_graph(graph);
    out.spectra = bracket_spectra(out.neumann, graph);
    const auto profile = degrees(graph);
    const auto intervals = bracket_intervals(out.spectra, sorted_potentials(graph), profile.kappa_plus, out.neumann.nu,
                                             out.neumann.nu_D, out.neumann.nu_N);
    const auto estimates = estimate_total_band_length(out.neumann, out.spectra, graph);
    out.report = verify_and_certify(bands, intervals, estimates);
    return out;
}

GaugeBudgetError::GaugeBudgetError(std::size_t count)
    : std::runtime_error("gauge search budget exceeded: " + std::to_string(count) + " gauges > " +
                         std::to_string(kGaugeBudget)),
      count(count)
{
}

GaugeSearchResult gauge_search(const PeriodicGraph& graph, const BandIntervals& bands, int radius, unsigned threads)
{
    if (radius < 0) throw std::invalid_argument("gauge_search: radius must be >= 0");
    require_valid(graph);
    const std::size_t digits = graph.num_classes() * static_cast<std::size_t>(graph.dimension);
    const std::size_t base = 2 * static_cast<std::size_t>(radius) + 1;
    std::size_t count = 1;
    for (std::size_t i = 0; i < digits; ++i) {
        count *= base;
        if (count > kGaugeBudget) {
            // Report the full count when it is representable.
            double full = std::pow(static_cast<double>(base), static_cast<double>(digits));
            throw GaugeBudgetError(full < 1e18 ? static_cast<std::size_t>(full) : count);
        }
    }

    // Flat index -> offsets; increasing index is lexicographic order of the tuple.
    auto offsets_of = [&](std::size_t index) {
        std::vector<LatticeVector> offsets(graph.num_classes(), LatticeVector::Zero(graph.dimension));
        for (std::size_t pos = digits; pos-- > 0;) {
            const auto digit = static_cast<int>(index % base) - radius;
            index /= base;
            offsets[pos / graph.dimension](static_cast<Eigen::Index>(pos % graph.dimension)) = digit;
        }
        return offsets;
    };

    std::vector<double> certified(count, 0.0);
    detail::parallel_for(count, threads, [&](std::size_t g) {
        const auto offsets = offsets_of(g);
        certified[g] = bracket(shift_gauge(graph, offsets), bands).report.certified_gap_length();
    });

    std::size_t best = 0;
    for (std::size_t g = 1; g < count; ++g)
        if (certified[g] > certified[best] + scaled_tolerance(kInclusionTolerance, certified[best], 0.0)) best = g;

    GaugeSearchResult result;
    result.offsets = offsets_of(best);
    result.analysis = bracket(shift_gauge(graph, result.offsets), bands);
    result.gauges_examined = count;
    return result;
}

}  // namespace pgband
