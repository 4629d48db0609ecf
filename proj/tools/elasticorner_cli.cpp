// elasticorner command-line front end.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <elasticorner/elasticorner.hpp>

using namespace elasticorner;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

constexpr double kReduceTolerance = 1e-3;

/// Usage-level failure raised by the commands themselves.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

SourceScene scene_with_convention(const SourceScene& s, const std::string& conv) {
    if (conv.empty()) return s;
    json j = scene_to_json(s);
    j["convention"] = conv;
    return parse_scene(j);
}

struct Options {
    std::string scene;
    std::string out;
    std::string json_path;
    std::string convention;
    std::string suite = "all";
    std::string config;
    std::optional<std::string> s_grid;
    std::optional<std::string> xi;
    std::string indices = "1,2";
    int directions = 64;
    int vertex = 0;
    double omega = 1.0;
    std::optional<double> lambda;
    std::optional<double> mu;
    WitnessOptions witness;
};

bool bad_input(const Error& e) {
    return dynamic_cast<const ParseError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
           dynamic_cast<const ConvexityError*>(&e) || dynamic_cast<const GeometryError*>(&e) ||
           dynamic_cast<const CapabilityError*>(&e);
}

/// Comma-separated numbers; an empty list or token is a usage error.
std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || tok.find_first_not_of(" \t", used) != std::string::npos)
            throw UsageError(std::string(flag) + ": bad number '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty() || (!text.empty() && text.back() == ',')) throw UsageError(std::string(flag) + ": empty list");
    return out;
}

std::vector<double> grid_or_default(const Options& o) {
    return o.s_grid ? parse_list(*o.s_grid, "--s-grid") : default_s_grid();
}

int cmd_verify(const Options& o) {
    const auto& suites = verify_suites();
    if (std::find(suites.begin(), suites.end(), o.suite) == suites.end())
        throw UsageError("unknown suite '" + o.suite + "'");
    const VerifyReport rep = run_verify(o.suite);
    json checks = json::array();
    for (const auto& c : rep.checks) {
        const char* status = c.pass ? "PASS" : (c.known_defect ? "KNOWN" : "FAIL");
        std::printf("%-5s %-13s %-40s value %-12s %s %s%s%s\n", status, c.suite.c_str(), c.name.c_str(),
                    format_number(c.value).c_str(), c.comparison == Comparison::AtMost ? "<=" : ">=",
                    format_number(c.tolerance).c_str(), c.note.empty() ? "" : "  ", c.note.c_str());
        json r = {{"suite", c.suite},
                  {"name", c.name},
                  {"value", real_json(c.value)},
                  {"tolerance", c.tolerance},
                  {"comparison", c.comparison == Comparison::AtMost ? "<=" : ">="},
                  {"pass", c.pass},
                  {"known_defect", c.known_defect}};
        if (!c.note.empty()) r["note"] = c.note;
        checks.push_back(r);
    }
    std::printf("%zu checks, %zu failed\n", rep.checks.size(), rep.failures());
    if (!o.json_path.empty())
        write_json(o.json_path, {{"suite", rep.suite}, {"checks", checks}, {"failures", rep.failures()}, {"pass", rep.ok()}});
    return rep.ok() ? kOk : kCheckFailed;
}

int cmd_farfield(const Options& o) {
    const SourceScene s = scene_with_convention(load_scene(o.scene), o.convention);
    if (o.directions < 1) throw UsageError("--directions must be positive");
    const FarFieldPattern p = far_field_pattern(s, o.directions);
    std::ostringstream csv;
    write_farfield_csv(csv, p);
    write_text(o.out, csv.str());
    if (!o.json_path.empty())
        write_json(o.json_path, {{"directions", o.directions}, {"dim", p.dim}, {"max_magnitude", p.max_magnitude()}});
    return kOk;
}

int cmd_witness(const Options& o) {
    const SourceScene s = scene_with_convention(load_scene(o.scene), o.convention);
    if (!s.is_polygon()) throw UsageError("witness needs a polygon scene");
    if (o.vertex < 0 || o.vertex >= static_cast<int>(s.polygon().size())) throw UsageError("--vertex out of range");
    const auto grid = grid_or_default(o);
    const MomentExtraction m = moment_extract(s, o.vertex, grid);
    const WitnessSweep w = witness(s, o.vertex, grid, o.witness);
    std::ostringstream csv;
    write_witness_csv(csv, w);
    if (!o.out.empty()) write_text(o.out, csv.str());
    const json j = {{"vertex", o.vertex}, {"witness", to_json(w)}, {"moment", to_json(m)}};
    write_json(o.json_path, j);
    return kOk;
}

int cmd_moment(const Options& o) {
    const SourceScene s = scene_with_convention(load_scene(o.scene), o.convention);
    if (!s.is_polygon()) throw UsageError("moment needs a polygon scene");
    if (o.vertex < 0 || o.vertex >= static_cast<int>(s.polygon().size())) throw UsageError("--vertex out of range");
    const MomentExtraction m = moment_extract(s, o.vertex, grid_or_default(o));
    json j = to_json(m);
    j["vertex"] = o.vertex;
    write_json(o.json_path, j);
    return kOk;
}

int cmd_nonradiating(const Options& o) {
    const auto idx = parse_list(o.indices, "--indices");
    if (idx.size() != 2 || idx[0] != std::floor(idx[0]) || idx[1] != std::floor(idx[1]))
        throw UsageError("--indices takes two integer zero indices p,s");
    if (o.lambda.has_value() != o.mu.has_value()) throw UsageError("--lambda and --mu go together");
    if (o.directions < 1) throw UsageError("--directions must be positive");
    NonradiatingReport r;
    if (o.lambda) {
        if (!(o.omega > 0.0)) throw UsageError("--omega must be positive");
        r = verify_nonradiating(BallScene{1.0, Vec3::UnitX(), o.omega, LameParameters(*o.lambda, *o.mu, 3)}, o.directions);
    } else {
        r = verify_nonradiating(o.omega, static_cast<int>(idx[0]), static_cast<int>(idx[1]), o.directions);
    }
    write_json(o.json_path, to_json(r));
    return kOk;
}

std::vector<Vec2> interior_points(const CornerChart& c) {
    std::vector<Vec2> pts;
    for (double f : {0.25, 0.4})
        for (double a : {-0.25, 0.25}) {
            const double t = a * c.sector.opening();
            pts.push_back(f * c.h * Vec2(std::cos(t), std::sin(t)));
        }
    return pts;
}

int cmd_reduce(const Options& o) {
    PrismConfig c = load_prism(o.config);
    if (o.xi) c.xi = parse_list(*o.xi, "--xi");
    if (o.s_grid) c.s_grid = parse_list(*o.s_grid, "--s-grid");
    if (!o.convention.empty()) c.convention = parse_convention(o.convention);
    if (c.xi.empty()) throw UsageError("empty xi list");
    const PrismField u(c.chart, c.core);
    json per = json::array();
    bool ok = true;
    for (double xi : c.xi) {
        const auto r = reduced_equation_check(u, c.material, c.cutoff.with_xi(xi), gamma_samples(c.chart),
                                              interior_points(c.chart), c.omega, 1e-3, c.convention);
        ok = ok && r.gamma_residual <= kReduceTolerance && r.interior_residual <= kReduceTolerance;
        per.push_back(to_json(r));
    }
    json j = {{"convention", std::string(to_string(c.convention))}, {"tolerance", kReduceTolerance}, {"reduced_equation", per}};
    bool has_source = false;
    for (const auto& p : c.source) has_source = has_source || !p.is_zero();
    if (has_source) j["edge_demo"] = to_json(edge_vanishing_demo(c.source, c.xi, c.chart, c.cutoff, c.s_grid));
    j["pass"] = ok;
    write_json(o.json_path, j);
    return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corner scattering toolkit for time-harmonic elastic sources"};
    app.require_subcommand(1);
    Options o;

    auto* verify = app.add_subcommand("verify", "Run named invariant checks");
    verify->add_option("--suite", o.suite, "special|probe|geometry|elastic|corner|reduction|nonradiating|all");
    verify->add_option("--json", o.json_path, "Report path");

    auto* farfield = app.add_subcommand("farfield", "Far-field pattern of a scene as CSV");
    farfield->add_option("--scene", o.scene, "Scene JSON")->required();
    farfield->add_option("--directions", o.directions, "Number of directions");
    farfield->add_option("--out", o.out, "CSV path (stdout if omitted)");
    farfield->add_option("--json", o.json_path, "Summary path");
    farfield->add_option("--convention", o.convention, "paper|standard");

    auto* wit = app.add_subcommand("witness", "Corner witness sweep and moment extraction at a vertex");
    wit->add_option("--scene", o.scene, "Scene JSON")->required();
    wit->add_option("--vertex", o.vertex, "Vertex index");
    wit->add_option("--s-grid", o.s_grid, "Comma-separated s values");
    wit->add_option("--out", o.out, "CSV path: s, |W|, arg W");
    wit->add_option("--json", o.json_path, "Report path (stdout if omitted)");
    wit->add_option("--convention", o.convention, "paper|standard");
    wit->add_option("--angular-nodes", o.witness.angular_nodes, "Angular nodes of the field interpolant");
    wit->add_option("--radial-levels", o.witness.radial_levels, "Radial halvings of the field interpolant");
    wit->add_option("--radial-order", o.witness.radial_order, "Nodes per radial panel");

    auto* moment = app.add_subcommand("moment", "Scaled moments of the density at a vertex");
    moment->add_option("--scene", o.scene, "Scene JSON")->required();
    moment->add_option("--vertex", o.vertex, "Vertex index");
    moment->add_option("--s-grid", o.s_grid, "Comma-separated s values");
    moment->add_option("--json", o.json_path, "Report path (stdout if omitted)");
    moment->add_option("--convention", o.convention, "paper|standard");

    auto* nonrad = app.add_subcommand("nonradiating", "Ball source with tuned Lame parameters");
    nonrad->add_option("--omega", o.omega, "Frequency");
    nonrad->add_option("--indices", o.indices, "Zero indices p,s of J_{3/2}");
    nonrad->add_option("--directions", o.directions, "Number of directions");
    nonrad->add_option("--lambda", o.lambda, "Override lambda (with --mu)");
    nonrad->add_option("--mu", o.mu, "Override mu (with --lambda)");
    nonrad->add_option("--json", o.json_path, "Report path (stdout if omitted)");

    auto* reduce = app.add_subcommand("reduce", "Dimension reduction check on a prism");
    reduce->add_option("--config", o.config, "Prism JSON")->required();
    reduce->add_option("--xi", o.xi, "Comma-separated xi values");
    reduce->add_option("--s-grid", o.s_grid, "Comma-separated s values");
    reduce->add_option("--json", o.json_path, "Report path (stdout if omitted)");
    reduce->add_option("--convention", o.convention, "paper|standard");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (!o.convention.empty()) parse_convention(o.convention);
        if (*verify) return cmd_verify(o);
        if (*farfield) return cmd_farfield(o);
        if (*wit) return cmd_witness(o);
        if (*moment) return cmd_moment(o);
        if (*nonrad) return cmd_nonradiating(o);
        if (*reduce) return cmd_reduce(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_input(e) ? kUsage : kCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
    return kUsage;
}
