#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "wachspress/basis.hpp"
#include "wachspress/bounds.hpp"
#include "wachspress/errors.hpp"
#include "wachspress/fem.hpp"
#include "wachspress/format.hpp"
#include "wachspress/mesh.hpp"
#include "wachspress/shapes.hpp"

namespace wachspress::cli {

namespace {

using nlohmann::ordered_json;

/// Thrown for malformed option values that CLI11 cannot check itself.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.emplace_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) return parts;
        start = pos + 1;
    }
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> coords;
    for (const std::string& part : split(text, ',')) {
        const auto value = parse_double(part);
        if (!value || !std::isfinite(*value)) throw UsageError("--point: '" + part + "' is not a number");
        coords.push_back(*value);
    }
    if (coords.size() != 2 && coords.size() != 3) throw UsageError("--point expects x,y or x,y,z");
    return coords;
}

std::pair<int, int> parse_levels(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        int value = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
            throw UsageError("--levels expects L or L0..L1, got '" + text + "'");
        return value;
    };
    const std::size_t dots = text.find("..");
    if (dots == std::string::npos) {
        const int level = to_int(text);
        return {level, level};
    }
    return {to_int(text.substr(0, dots)), to_int(text.substr(dots + 2))};
}

MeshFamily parse_family(const std::string& kind) {
    return kind == "hex" ? MeshFamily::hex : MeshFamily::prism;
}

/// `polygon 1`, `points N`, then N lines `x y`; '#' comments allowed.
Polygon read_polygon(std::istream& in) {
    std::string line;
    std::size_t number = 0;
    auto next = [&](const char* what) {
        while (std::getline(in, line)) {
            ++number;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            return;
        }
        throw ParseError(number + 1, std::string("unexpected end of file, expected ") + what);
    };
    next("header");
    if (line.find("polygon 1") != 0) throw ParseError(number, "expected 'polygon 1'");
    next("'points N'");
    std::istringstream header(line);
    std::string keyword;
    long count = -1;
    if (!(header >> keyword >> count) || keyword != "points" || count < 3)
        throw ParseError(number, "expected 'points N' with N >= 3");
    Polygon p;
    for (long i = 0; i < count; ++i) {
        next("a point");
        std::istringstream fields(line);
        std::string xs, ys, extra;
        fields >> xs >> ys;
        const auto x = parse_double(xs), y = parse_double(ys);
        if (!x || !y || (fields >> extra)) throw ParseError(number, "expected 'x y'");
        p.vertices.emplace_back(*x, *y);
    }
    return p;
}

/// `builtin:<name>` or a path to a polygon file or a one-cell mesh file.
Shape load_shape(const std::string& spec) {
    Shape shape;
    if (spec.rfind("builtin:", 0) == 0) {
        shape = builtin_shape(spec.substr(8));
    } else {
        std::ifstream in(spec);
        if (!in) throw Error("cannot open shape file '" + spec + "'");
        std::string first;
        while (std::getline(in, first) && (first.empty() || first[0] == '#')) {}
        in.clear();
        in.seekg(0);
        if (first.rfind("polygon", 0) == 0) {
            shape = read_polygon(in);
        } else {
            const PolyMesh mesh = read_mesh(in);
            if (mesh.cells.size() != 1)
                throw DomainError("a shape file must hold exactly one cell, found " +
                                  std::to_string(mesh.cells.size()));
            shape = cell_view(mesh, 0).poly;
        }
    }
    const ConvexityReport report = std::visit([](const auto& s) { return validate(s); }, shape);
    if (!report.is_convex) {
        std::string what = "shape is not strictly convex";
        if (!report.offending_entities.empty()) what += ": " + report.offending_entities.front();
        throw NotConvex(what);
    }
    return shape;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    return out;
}

ordered_json document(const std::string& command) {
    return ordered_json{{"schema_version", kSchemaVersion}, {"command", command}};
}

template <class Vector>
ordered_json to_json(const Vector& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

template <class Vector>
std::string to_text(const Vector& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
    return s;
}

// ---------------------------------------------------------------------------

struct EvalOptions {
    std::string shape;
    std::string point;
};

template <int Dim, class Poly>
void print_basis(const Poly& poly, const Eigen::Matrix<double, Dim, 1>& x, const BasisEval<Dim>& basis, bool json,
                 std::ostream& out) {
    double sum = 0.0;
    for (double phi : basis.phi) sum += phi;
    const double residual = std::abs(sum - 1.0);
    if (json) {
        ordered_json doc = document("eval");
        doc["dimension"] = Dim;
        doc["point"] = to_json(x);
        doc["vertices"] = ordered_json::array();
        for (std::size_t i = 0; i < basis.size(); ++i)
            doc["vertices"].push_back(
                {{"index", i}, {"position", to_json(poly.vertices[i])}, {"phi", basis.phi[i]}, {"grad", to_json(basis.dphi[i])}});
        doc["partition_of_unity_residual"] = residual;
        out << doc.dump(2) << '\n';
        return;
    }
    out << "dimension: " << Dim << '\n' << "point: " << to_text(x) << '\n' << "vertex phi grad\n";
    for (std::size_t i = 0; i < basis.size(); ++i)
        out << i << ' ' << format_double(basis.phi[i]) << ' ' << to_text(basis.dphi[i]) << '\n';
    out << "partition_of_unity_residual: " << format_double(residual) << '\n';
}

void run_eval(const EvalOptions& o, bool json, std::ostream& out) {
    const Shape shape = load_shape(o.shape);
    const std::vector<double> x = parse_point(o.point);
    if (const auto* p = std::get_if<Polygon>(&shape)) {
        if (x.size() != 2) throw UsageError("--point needs 2 coordinates for a polygon");
        const Vec2 point(x[0], x[1]);
        print_basis<2>(*p, point, wachspress_2d(*p, point), json, out);
    } else {
        const auto& poly = std::get<Polyhedron>(shape);
        if (x.size() != 3) throw UsageError("--point needs 3 coordinates for a polyhedron");
        const Vec3 point(x[0], x[1], x[2]);
        print_basis<3>(poly, point, wachspress_3d(poly, point), json, out);
    }
}

// ---------------------------------------------------------------------------

struct AnalyzeOptions {
    std::string shape;
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
};

void run_analyze(const AnalyzeOptions& o, bool json, std::ostream& out) {
    const Shape shape = load_shape(o.shape);
    const BoundReport report =
        std::visit([&](const auto& s) { return estimate_Lambda(s, o.samples, o.seed); }, shape);
    auto kv = to_key_values(report);

    if (const auto* p = std::get_if<Polygon>(&shape)) {
        const PolygonAngleBound a = polygon_angle_bound(*p);
        kv.emplace_back("angle_bound", format_double(a.bound));
        kv.emplace_back("min_edge", format_double(a.min_edge));
        kv.emplace_back("min_angle", format_double(a.min_angle));
        kv.emplace_back("max_angle", format_double(a.max_angle));
        if (report.special_bound && report.special_bound->tag == ShapeTag::regular_ngon) {
            // closed forms for the unit circumcircle, rescaled to this polygon
            const double radius = (p->vertices[0] - vertex_centroid(*p)).norm();
            const auto ref = regular_ngon_reference(static_cast<int>(p->size()));
            kv.emplace_back("ngon_h_star", format_double(ref.h_star * radius));
            kv.emplace_back("ngon_lambda_vertex", format_double(ref.lambda_vertex / radius));
            kv.emplace_back("ngon_lower_bound", format_double(ref.lower_bound / radius));
            kv.emplace_back("ngon_upper_bound", format_double(ref.upper_bound / radius));
        }
    }
    kv.emplace_back("bracket_holds",
                    report.lambda_estimate() >= report.lower_bound_general * (1 - 1e-9) &&
                            report.lambda_max_sampled <= report.upper_bound_general * (1 + 1e-9)
                        ? "true"
                        : "false");

    if (json) {
        ordered_json doc = document("analyze");
        doc["dimension"] = report.dimension;
        doc["samples"] = report.samples;
        for (const auto& [key, value] : kv) {
            if (key == "dimension" || key == "samples") continue;
            if (key == "non_simple_vertices") {
                doc[key] = report.non_simple_vertices;
            } else if (key == "bracket_holds") {
                doc[key] = value == "true";
            } else if (const auto number = parse_double(value)) {
                doc[key] = *number;
            } else {
                doc[key] = value;
            }
        }
        out << doc.dump(2) << '\n';
        return;
    }
    for (const auto& [key, value] : kv) out << key << ": " << value << '\n';
}

// ---------------------------------------------------------------------------

struct MeshOptions {
    std::string kind = "hex";
    int level = 0;
    std::string out;
};

void run_mesh(const MeshOptions& o, bool json, std::ostream& out) {
    const PolyMesh mesh = family_mesh(parse_family(o.kind), o.level);
    save(mesh, o.out);
    const MeshStats s = stats(mesh);
    if (json) {
        ordered_json doc = document("mesh");
        doc["kind"] = o.kind;
        doc["level"] = o.level;
        doc["path"] = o.out;
        doc["n_nodes"] = s.n_nodes;
        doc["n_cells"] = s.n_cells;
        doc["n_boundary_nodes"] = mesh.boundary_nodes.size();
        doc["h"] = s.h;
        doc["min_h_star_scaled"] = s.min_h_star_scaled;
        out << doc.dump(2) << '\n';
        return;
    }
    out << "path: " << o.out << '\n'
        << "n_nodes: " << s.n_nodes << '\n'
        << "n_cells: " << s.n_cells << '\n'
        << "n_boundary_nodes: " << mesh.boundary_nodes.size() << '\n'
        << "h: " << format_double(s.h) << '\n'
        << "min_h_star_scaled: " << format_double(s.min_h_star_scaled) << '\n';
}

// ---------------------------------------------------------------------------

struct SolveOptions {
    std::string mesh;
    std::string out;
    unsigned threads = 1;
    bool plain = false;
};

void run_solve(const SolveOptions& o, bool json, std::ostream& out) {
    const PolyMesh mesh = load(o.mesh);
    const GradientMode mode = o.plain ? GradientMode::plain : GradientMode::corrected;
    const FemSolution solution = solve(assemble(mesh, model_source, o.threads, mode));
    const ErrorNorms err = error_norms(mesh, solution.nodal, model_solution, model_gradient);
    {
        std::ofstream file = open_output(o.out);
        file << "node,x,y,z,u\n";
        for (Index v = 0; v < mesh.points.size(); ++v) {
            const Vec3& p = mesh.points[v];
            file << v << ',' << format_double(p.x()) << ',' << format_double(p.y()) << ',' << format_double(p.z())
                 << ',' << format_double(solution.nodal[static_cast<Eigen::Index>(v)]) << '\n';
        }
        if (!file) throw Error("cannot write '" + o.out + "'");
    }
    double boundary_max = 0.0;
    for (Index v : mesh.boundary_nodes)
        boundary_max = std::max(boundary_max, std::abs(solution.nodal[static_cast<Eigen::Index>(v)]));
    const MeshStats s = stats(mesh);
    if (json) {
        ordered_json doc = document("solve");
        doc["mesh"] = o.mesh;
        doc["path"] = o.out;
        doc["n_nodes"] = s.n_nodes;
        doc["n_cells"] = s.n_cells;
        doc["h"] = s.h;
        doc["gradients"] = o.plain ? "plain" : "corrected";
        doc["rel_l2"] = err.rel_l2;
        doc["rel_h1"] = err.rel_h1_semi;
        doc["boundary_max_abs"] = boundary_max;
        out << doc.dump(2) << '\n';
        return;
    }
    out << "path: " << o.out << '\n'
        << "n_nodes: " << s.n_nodes << '\n'
        << "n_cells: " << s.n_cells << '\n'
        << "h: " << format_double(s.h) << '\n'
        << "gradients: " << (o.plain ? "plain" : "corrected") << '\n'
        << "rel_l2: " << format_double(err.rel_l2) << '\n'
        << "rel_h1: " << format_double(err.rel_h1_semi) << '\n'
        << "boundary_max_abs: " << format_double(boundary_max) << '\n';
}

// ---------------------------------------------------------------------------

struct ConvergenceOptions {
    std::string kind = "hex";
    std::string levels;
    std::string out;
    unsigned threads = 1;
    bool plain = false;
};

void run_convergence(const ConvergenceOptions& o, bool json, std::ostream& out) {
    const auto [first, last] = parse_levels(o.levels);
    if (first > last) throw UsageError("--levels: first level exceeds last");
    const GradientMode mode = o.plain ? GradientMode::plain : GradientMode::corrected;
    const auto rows = convergence_study(parse_family(o.kind), first, last, o.threads, mode);
    if (!o.out.empty()) {
        std::ofstream file = open_output(o.out);
        write_convergence_csv(rows, file);
        if (!file) throw Error("cannot write '" + o.out + "'");
    }
    if (json) {
        ordered_json doc = document("convergence");
        doc["kind"] = o.kind;
        doc["gradients"] = o.plain ? "plain" : "corrected";
        doc["rows"] = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json row{{"mesh", r.mesh}, {"n_nodes", r.n_nodes}, {"h", r.h}, {"rel_l2", r.rel_l2}};
            row["l2_rate"] = r.l2_rate ? ordered_json(*r.l2_rate) : ordered_json(nullptr);
            row["rel_h1"] = r.rel_h1;
            row["h1_rate"] = r.h1_rate ? ordered_json(*r.h1_rate) : ordered_json(nullptr);
            doc["rows"].push_back(row);
        }
        out << doc.dump(2) << '\n';
        return;
    }
    write_convergence_csv(rows, out);
}

std::string error_type(const Error& e) {
    if (dynamic_cast<const PointNotInterior*>(&e)) return "PointNotInterior";
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const NotConvex*>(&e)) return "NotConvex";
    if (dynamic_cast<const NonPlanarFace*>(&e)) return "NonPlanarFace";
    if (dynamic_cast<const DegenerateGeometry*>(&e)) return "DegenerateGeometry";
    if (dynamic_cast<const BadTopology*>(&e)) return "BadTopology";
    if (dynamic_cast<const NonSimpleVertex*>(&e)) return "NonSimpleVertex";
    if (dynamic_cast<const SolveError*>(&e)) return "SolveError";
    if (dynamic_cast<const ShapeError*>(&e)) return "ShapeError";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    return "Error";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wachspress coordinates, gradient bounds and polyhedral FEM"};
    app.name("wachspress");
    app.require_subcommand(1);

    bool json = false;
    EvalOptions eval;
    AnalyzeOptions analyze;
    MeshOptions mesh;
    SolveOptions solve_opts;
    ConvergenceOptions conv;

    auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", json, "Print one JSON document"); };
    const std::vector<std::string> kinds = {"hex", "prism"};

    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate coordinates and gradients at a point");
    eval_cmd->add_option("--shape", eval.shape, "builtin:<name> or a shape file")->required();
    eval_cmd->add_option("--point", eval.point, "x,y or x,y,z")->required();
    add_json(eval_cmd);

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "Bracket the gradient-sum maximum");
    analyze_cmd->add_option("--shape", analyze.shape, "builtin:<name> or a shape file")->required();
    analyze_cmd->add_option("--samples", analyze.samples, "Interior sample count")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
    analyze_cmd->add_option("--seed", analyze.seed, "Sampling seed")->capture_default_str();
    add_json(analyze_cmd);

    CLI::App* mesh_cmd = app.add_subcommand("mesh", "Generate a mesh of the unit cube");
    mesh_cmd->add_option("--kind", mesh.kind, "hex or prism")->required()->check(CLI::IsMember(kinds));
    mesh_cmd->add_option("--level", mesh.level, "Refinement level")->required()->check(CLI::Range(0, 8));
    mesh_cmd->add_option("--out", mesh.out, "Output mesh file")->required();
    add_json(mesh_cmd);

    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve the model Poisson problem on a mesh file");
    solve_cmd->add_option("--mesh", solve_opts.mesh, "Input mesh file")->required();
    solve_cmd->add_option("--out", solve_opts.out, "Output CSV of nodal values")->required();
    solve_cmd->add_option("--threads", solve_opts.threads, "Assembly workers")
        ->capture_default_str()
        ->check(CLI::Range(1u, 1024u));
    solve_cmd->add_flag("--plain-gradients", solve_opts.plain, "Disable the gradient correction");
    add_json(solve_cmd);

    CLI::App* conv_cmd = app.add_subcommand("convergence", "Convergence study of the model problem");
    conv_cmd->add_option("--kind", conv.kind, "hex or prism")->required()->check(CLI::IsMember(kinds));
    conv_cmd->add_option("--levels", conv.levels, "L0..L1")->required();
    conv_cmd->add_option("--out", conv.out, "Output CSV");
    conv_cmd->add_option("--threads", conv.threads, "Assembly workers")
        ->capture_default_str()
        ->check(CLI::Range(1u, 1024u));
    conv_cmd->add_flag("--plain-gradients", conv.plain, "Disable the gradient correction");
    add_json(conv_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string command = chosen->get_name();
    try {
        if (chosen == eval_cmd) run_eval(eval, json, out);
        else if (chosen == analyze_cmd) run_analyze(analyze, json, out);
        else if (chosen == mesh_cmd) run_mesh(mesh, json, out);
        else if (chosen == solve_cmd) run_solve(solve_opts, json, out);
        else run_convergence(conv, json, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const Error& e) {
        const std::string message = e.what();
        err << "error: " << message << '\n';
        if (json) {
            ordered_json doc = document(command);
            doc["error"] = {{"type", error_type(e)}, {"message", message}};
            if (const auto* p = dynamic_cast<const ParseError*>(&e)) doc["error"]["line"] = p->line();
            if (const auto* p = dynamic_cast<const PointNotInterior*>(&e))
                doc["error"]["min_distance"] = p->min_distance();
            out << doc.dump(2) << '\n';
        }
        return domain_error;
    }
    return ok;
}

}  // namespace wachspress::cli
