#include "pgband/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace pgband {

namespace {

using json = nlohmann::ordered_json;

void line_column(std::string_view text, std::size_t byte, std::size_t& line, std::size_t& column)
{
    line = 1;
    column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what)
{
    throw ParseError("schema: " + where + ": " + what);
}

const json& require_key(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object()) schema_error(where, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) schema_error(where, std::string("missing key \"") + key + "\"");
    return *it;
}

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

json intervals_json(const std::vector<Interval>& list)
{
    json out = json::array();
    for (const auto& i : list) out.push_back(interval_json(i));
    return out;
}

json vector_json(const Eigen::VectorXd& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json lattice_json(const LatticeVector& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json summary_json(const ReportSummary& s)
{
    return json{{"nu", s.nu},         {"nu_D", s.nu_D},
                {"nu_N", s.nu_N},     {"beta", s.beta},
                {"kappa_plus", s.kappa_plus}, {"grid_N", s.grid_N}};
}

json bands_json(const BandIntervals& bands)
{
    json out = json::array();
    for (std::size_t n = 0; n < bands.bands.size(); ++n)
        out.push_back(json{{"n", n + 1},
                           {"lo", bands.bands[n].lo},
                           {"hi", bands.bands[n].hi},
                           {"flat_candidate", static_cast<bool>(bands.flat_candidate[n])}});
    return out;
}

json estimates_json(const Analysis& a)
{
    const auto& r = a.bracket.report;
    return json{{"est1", r.estimates.est1}, {"est2", r.estimates.est2}, {"total_band_length", r.total_band_length}};
}

void add_bracket_fields(json& out, const Analysis& a, const PeriodicGraph& graph)
{
    const auto& ng = a.bracket.neumann;
    const auto& r = a.bracket.report;
    json gauge = json::object();
    for (std::size_t j = 0; j < graph.num_classes(); ++j) gauge[graph.classes[j].id] = lattice_json(a.gauge[j]);
    out["gauge"] = gauge;
    json inner = json::array();
    json boundary = json::array();
    for (std::size_t i = 0; i < ng.nu; ++i)
        (i < ng.nu_D ? inner : boundary).push_back(graph.classes[ng.interior_order[i]].id);
    out["inner_classes"] = inner;
    out["boundary_classes"] = boundary;
    out["lambda_N"] = vector_json(a.bracket.spectra.neumann);
    out["lambda_D"] = vector_json(a.bracket.spectra.dirichlet);
    out["J"] = intervals_json(r.intervals.J);
    out["J_tilde"] = intervals_json(r.intervals.J_tilde);
    json cap = json::array();
    for (const auto& c : r.J_cap) cap.push_back(c ? interval_json(*c) : json(nullptr));
    out["J_cap"] = cap;
    out["inclusion_ok"] = r.inclusion_ok();
    out["certified_gaps"] = intervals_json(r.certified_gaps);
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(line ? what + " at line " + std::to_string(line) + ", column " + std::to_string(column) : what),
      line(line),
      column(column)
{
}

PeriodicGraph parse_spec_document(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 0, column = 0;
        line_column(text, e.byte == 0 ? 0 : e.byte - 1, line, column);
        throw ParseError("malformed JSON", line, column);
    }

    PeriodicGraph graph;
    const json& dim = require_key(doc, "dimension", "document");
    if (!dim.is_number_integer() || dim.get<long long>() < 1)
        schema_error("dimension", "expected a positive integer");
    graph.dimension = dim.get<int>();

    const json& vertices = require_key(doc, "vertices", "document");
    if (!vertices.is_array() || vertices.empty()) schema_error("vertices", "expected a nonempty array");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const std::string where = "vertices[" + std::to_string(i) + "]";
        const json& id = require_key(vertices[i], "id", where);
        const json& potential = require_key(vertices[i], "potential", where);
        if (!id.is_string()) schema_error(where + ".id", "expected a string");
        if (!potential.is_number()) schema_error(where + ".potential", "expected a number");
        const auto name = id.get<std::string>();
        for (const auto& c : graph.classes)
            if (c.id == name) schema_error(where + ".id", "duplicate id \"" + name + "\"");
        graph.classes.push_back({name, potential.get<double>()});
    }

    const json& edges = require_key(doc, "edges", "document");
    if (!edges.is_array() || edges.empty()) schema_error("edges", "expected a nonempty array");
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::string where = "edges[" + std::to_string(e) + "]";
        FundamentalEdge edge;
        for (const char* key : {"from", "to"}) {
            const json& end = require_key(edges[e], key, where);
            if (!end.is_string()) schema_error(where + "." + key, "expected a class id string");
            try {
                (key[0] == 'f' ? edge.from : edge.to) = graph.class_position(end.get<std::string>());
            } catch (const GraphError& err) {
                schema_error(where + "." + key, err.what());
            }
        }
        const json& index = require_key(edges[e], "index", where);
        if (!index.is_array()) schema_error(where + ".index", "expected an array of integers");
        if (index.size() != static_cast<std::size_t>(graph.dimension))
            schema_error(where + ".index", "length " + std::to_string(index.size()) + " != dimension " +
                                               std::to_string(graph.dimension));
        edge.index.resize(graph.dimension);
        for (std::size_t s = 0; s < index.size(); ++s) {
            if (!index[s].is_number_integer()) schema_error(where + ".index", "expected integers");
            edge.index(static_cast<Eigen::Index>(s)) = index[s].get<int>();
        }
        graph.edges.push_back(std::move(edge));
    }
    try {
        check_structure(graph);
    } catch (const GraphError& err) {
        schema_error("document", err.what());
    }
    return graph;
}

PeriodicGraph parse_spec(std::string_view text)
{
    PeriodicGraph graph = parse_spec_document(text);
    require_valid(graph);
    return graph;
}

std::string emit_spec(const PeriodicGraph& graph)
{
    json doc;
    doc["dimension"] = graph.dimension;
    json vertices = json::array();
    for (const auto& c : graph.classes) vertices.push_back(json{{"id", c.id}, {"potential", c.potential}});
    doc["vertices"] = vertices;
    json edges = json::array();
    for (const auto& e : graph.edges)
        edges.push_back(
            json{{"from", graph.classes[e.from].id}, {"to", graph.classes[e.to].id}, {"index", lattice_json(e.index)}});
    doc["edges"] = edges;
    return doc.dump(2) + "\n";
}

PeriodicGraph load_spec_file(const std::string& path, bool require_connected)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return require_connected ? parse_spec(buffer.str()) : parse_spec_document(buffer.str());
}

Analysis analyze(const PeriodicGraph& graph, const AnalysisOptions& options)
{
    require_valid(graph);
    Analysis out;
    const TorusGrid grid(graph.dimension, options.grid_N);
    const BandTable table = sample_bands(graph, grid, {options.threads, options.refine});
    out.bands = band_intervals(table, options.flat_tol);

    GaugeSearchResult best = gauge_search(graph, out.bands, options.gauge_radius, options.threads);
    out.gauge = std::move(best.offsets);
    out.bracket = std::move(best.analysis);

    const auto& ng = out.bracket.neumann;
    out.summary = {ng.nu, ng.nu_D, ng.nu_N, ng.beta, degrees(graph).kappa_plus, options.grid_N};
    return out;
}

std::string emit_report(const Analysis& analysis, const PeriodicGraph& graph)
{
    json doc;
    doc["summary"] = summary_json(analysis.summary);
    doc["bands"] = bands_json(analysis.bands);
    doc["gaps_observed"] = intervals_json(analysis.bands.gaps);
    add_bracket_fields(doc, analysis, graph);
    doc["estimates"] = estimates_json(analysis);
    return doc.dump(2) + "\n";
}

std::string emit_bands(const BandIntervals& bands, int grid_N)
{
    json doc;
    doc["grid_N"] = grid_N;
    doc["bands"] = bands_json(bands);
    doc["gaps_observed"] = intervals_json(bands.gaps);
    return doc.dump(2) + "\n";
}

std::string emit_bracket(const Analysis& analysis, const PeriodicGraph& graph)
{
    json doc;
    doc["summary"] = summary_json(analysis.summary);
    add_bracket_fields(doc, analysis, graph);
    return doc.dump(2) + "\n";
}

std::string emit_estimates(const Analysis& analysis)
{
    json doc;
    doc["summary"] = summary_json(analysis.summary);
    doc["estimates"] = estimates_json(analysis);
    return doc.dump(2) + "\n";
}

std::string emit_validation(const ValidationReport& report, const PeriodicGraph& graph)
{
    json doc;
    doc["valid"] = report.valid();
    doc["dimension"] = graph.dimension;
    doc["nu"] = graph.num_classes();
    doc["edges"] = graph.edges.size();
    doc["multigraph_connected"] = report.multigraph_connected;
    doc["lattice_spans"] = report.lattice_spans;
    doc["invariant_factors"] = report.lattice.invariant_factors;
    if (report.multigraph_connected) {
        const auto profile = degrees(graph);
        doc["kappa"] = profile.kappa;
        doc["kappa_plus"] = profile.kappa_plus;
    }
    if (!report.valid()) doc["reason"] = report.reason();
    return doc.dump(2) + "\n";
}

std::string emit_band_path_csv(const BandPath& path)
{
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    os << "s";
    for (Eigen::Index i = 0; i < path.theta.cols(); ++i) os << ",theta_" << i + 1;
    for (Eigen::Index n = 0; n < path.lambda.cols(); ++n) os << ",lambda_" << n + 1;
    os << "\n";
    for (Eigen::Index r = 0; r < path.arclength.size(); ++r) {
        os << path.arclength(r);
        for (Eigen::Index i = 0; i < path.theta.cols(); ++i) os << "," << path.theta(r, i);
        for (Eigen::Index n = 0; n < path.lambda.cols(); ++n) os << "," << path.lambda(r, n);
        os << "\n";
    }
    return os.str();
}

}  // namespace pgband
