#ifndef PGBAND_IO_HPP
#define PGBAND_IO_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pgband/bracketing.hpp"
#include "pgband/floquet.hpp"
#include "pgband/graph_model.hpp"

namespace pgband {

/// Malformed document or schema violation. `line`/`column` are 1-based and
/// zero when the location is not a text position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0);
    std::size_t line;
    std::size_t column;
};

/// Reads a graph description (JSON with "dimension", "vertices", "edges")
/// without checking connectivity.
PeriodicGraph parse_spec_document(std::string_view text);

/// parse_spec_document followed by require_valid.
PeriodicGraph parse_spec(std::string_view text);

std::string emit_spec(const PeriodicGraph& graph);

PeriodicGraph load_spec_file(const std::string& path, bool require_connected = true);

struct ReportSummary {
    std::size_t nu = 0;
    std::size_t nu_D = 0;
    std::size_t nu_N = 0;
    int beta = 0;
    int kappa_plus = 0;
    int grid_N = 0;
};

/// Full analysis of one graph: sampled bands plus the bracketing report of
/// the chosen gauge.
struct Analysis {
    ReportSummary summary;
    BandIntervals bands;
    BracketAnalysis bracket;
    std::vector<LatticeVector> gauge;  ///< offsets of the chosen gauge (all zero by default)
};

struct AnalysisOptions {
    int grid_N = 32;
    double flat_tol = 1e-8;
    bool refine = false;
    int gauge_radius = 0;
    unsigned threads = 0;
};

Analysis analyze(const PeriodicGraph& graph, const AnalysisOptions& options = {});

std::string emit_report(const Analysis& analysis, const PeriodicGraph& graph);
std::string emit_bands(const BandIntervals& bands, int grid_N);
std::string emit_bracket(const Analysis& analysis, const PeriodicGraph& graph);
std::string emit_estimates(const Analysis& analysis);
std::string emit_validation(const ValidationReport& report, const PeriodicGraph& graph);

/// CSV with header s,theta_1..theta_d,lambda_1..lambda_nu.
std::string emit_band_path_csv(const BandPath& path);

}  // namespace pgband

#endif  // PGBAND_IO_HPP
