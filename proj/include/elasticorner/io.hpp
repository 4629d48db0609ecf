#pragma once

// Scene and prism documents (strict JSON), far-field CSV and report JSON.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corner_indicator.hpp"
#include "dimension_reduction.hpp"
#include "errors.hpp"
#include "nonradiating.hpp"
#include "scene.hpp"
#include "volume_potential.hpp"

namespace elasticorner {

using json = nlohmann::json;

namespace detail {

inline void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ParseError(path + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ParseError(path + "." + it.key() + ": unknown key");
    }
}

inline const json& require(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) throw ParseError(path + "." + key + ": missing");
    return j.at(key);
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(path + ": must be finite");
    return v;
}

inline int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
    return j.get<int>();
}

inline int exponent(const json& t, const std::string& path, const char* key) {
    if (!t.contains(key)) return 0;
    const int e = integer(t.at(key), path + "." + key);
    if (e < 0) throw ParseError(path + "." + key + ": exponent must be non-negative");
    return e;
}

template <int Dim>
Polynomial<Dim> parse_polynomial(const json& j, const std::string& path) {
    reject_unknown(j, path, {"terms"});
    const json& terms = require(j, path, "terms");
    if (!terms.is_array()) throw ParseError(path + ".terms: expected an array");
    Polynomial<Dim> p;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = path + ".terms[" + std::to_string(i) + "]";
        const json& t = terms[i];
        if (Dim == 2)
            reject_unknown(t, tp, {"px", "py", "re", "im"});
        else
            reject_unknown(t, tp, {"px", "py", "pz", "re", "im"});
        typename Polynomial<Dim>::Exponent e{};
        e[0] = exponent(t, tp, "px");
        e[1] = exponent(t, tp, "py");
        if constexpr (Dim == 3) e[2] = exponent(t, tp, "pz");
        const double re = t.contains("re") ? number(t.at("re"), tp + ".re") : 0.0;
        const double im = t.contains("im") ? number(t.at("im"), tp + ".im") : 0.0;
        p.add_term(e, cplx(re, im));
    }
    return p;
}

template <int Dim>
PolyVec<Dim> parse_polyvec(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(Dim))
        throw ParseError(path + ": expected an array of " + std::to_string(Dim) + " components");
    PolyVec<Dim> out;
    for (int c = 0; c < Dim; ++c) out[c] = parse_polynomial<Dim>(j[c], path + "[" + std::to_string(c) + "]");
    return out;
}

template <int Dim>
json polynomial_json(const Polynomial<Dim>& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) {
        json t = {{"px", e[0]}, {"py", e[1]}};
        if constexpr (Dim == 3) t["pz"] = e[2];
        t["re"] = c.real();
        t["im"] = c.imag();
        terms.push_back(t);
    }
    return {{"terms", terms}};
}

inline Vec2 parse_point(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw ParseError(path + ": expected [x, y]");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

inline LameParameters parse_material(const json& j, int dim) {
    const double lambda = number(require(j, "scene", "lambda"), "scene.lambda");
    const double mu = number(require(j, "scene", "mu"), "scene.mu");
    try {
        return LameParameters(lambda, mu, dim);
    } catch (const ConvexityError& e) {
        throw ParseError(std::string(mu > 0.0 ? "scene.lambda" : "scene.mu") + ": " + e.what());
    }
}

inline OperatorConvention parse_convention_field(const json& j, const std::string& path) {
    if (!j.contains("convention")) return OperatorConvention::Paper;
    const json& c = j.at("convention");
    if (!c.is_string()) throw ParseError(path + ".convention: expected a string");
    try {
        return parse_convention(c.get<std::string>());
    } catch (const ParseError& e) {
        throw ParseError(path + ".convention: " + e.what());
    }
}

inline std::string position_message(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Parses JSON text, reporting syntax errors with line and column.
inline json parse_json_text(const std::string& text, const std::string& source = "input") {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": syntax error at " + detail::position_message(text, e.byte > 0 ? e.byte - 1 : 0));
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Scene document:
/// {dim, convention, lambda, mu, omega, support: {polygon | disk | ball},
///  density: [{terms: [{px, py, (pz), re, im}]}, ...], holder_alpha}
inline SourceScene parse_scene(const json& j) {
    detail::reject_unknown(j, "scene",
                           {"dim", "convention", "lambda", "mu", "omega", "support", "density", "holder_alpha"});
    const int dim = detail::integer(detail::require(j, "scene", "dim"), "scene.dim");
    if (dim != 2 && dim != 3) throw ParseError("scene.dim: must be 2 or 3");
    const OperatorConvention conv = detail::parse_convention_field(j, "scene");
    const LameParameters material = detail::parse_material(j, dim);
    const double omega = detail::number(detail::require(j, "scene", "omega"), "scene.omega");
    if (!(omega > 0.0)) throw ParseError("scene.omega: must be positive");
    double alpha = 1.0;
    if (j.contains("holder_alpha")) {
        alpha = detail::number(j.at("holder_alpha"), "scene.holder_alpha");
        if (!(alpha > 0.0 && alpha <= 1.0)) throw ParseError("scene.holder_alpha: must lie in (0, 1]");
    }

    const json& sup = detail::require(j, "scene", "support");
    detail::reject_unknown(sup, "scene.support", {"polygon", "disk", "ball"});
    if (sup.size() != 1) throw ParseError("scene.support: exactly one of polygon, disk, ball");
    const json& density = detail::require(j, "scene", "density");

    if (sup.contains("ball")) {
        if (dim != 3) throw ParseError("scene.support.ball: needs dim 3");
        const json& b = sup.at("ball");
        detail::reject_unknown(b, "scene.support.ball", {"radius"});
        const double r = detail::number(detail::require(b, "scene.support.ball", "radius"), "scene.support.ball.radius");
        if (!(r > 0.0)) throw ParseError("scene.support.ball.radius: must be positive");
        return SourceScene(BallSupport{r}, detail::parse_polyvec<3>(density, "scene.density"), material, omega, conv,
                           alpha);
    }
    if (dim != 2) throw ParseError("scene.support: dim 3 needs a ball");
    const PolyVec<2> f = detail::parse_polyvec<2>(density, "scene.density");
    if (sup.contains("disk")) {
        const json& d = sup.at("disk");
        detail::reject_unknown(d, "scene.support.disk", {"center", "radius"});
        const Vec2 c = d.contains("center") ? detail::parse_point(d.at("center"), "scene.support.disk.center")
                                            : Vec2::Zero();
        const double r = detail::number(detail::require(d, "scene.support.disk", "radius"), "scene.support.disk.radius");
        if (!(r > 0.0)) throw ParseError("scene.support.disk.radius: must be positive");
        return SourceScene(DiskSupport{c, r}, f, material, omega, conv, alpha);
    }
    const json& poly = sup.at("polygon");
    if (!poly.is_array()) throw ParseError("scene.support.polygon: expected an array of points");
    std::vector<Vec2> v;
    for (std::size_t i = 0; i < poly.size(); ++i)
        v.push_back(detail::parse_point(poly[i], "scene.support.polygon[" + std::to_string(i) + "]"));
    try {
        return SourceScene(ConvexPolygon(v), f, material, omega, conv, alpha);
    } catch (const GeometryError& e) {
        throw ParseError(std::string("scene.support.polygon: ") + e.what());
    }
}

inline SourceScene load_scene(const std::string& path) { return parse_scene(parse_json_text(read_text_file(path), path)); }

inline json scene_to_json(const SourceScene& s) {
    json j;
    j["dim"] = s.dim();
    j["convention"] = std::string(to_string(s.convention()));
    j["lambda"] = s.material().lambda();
    j["mu"] = s.material().mu();
    j["omega"] = s.freq().omega;
    j["holder_alpha"] = s.holder_alpha();
    json density = json::array();
    if (s.dim() == 3) {
        j["support"] = {{"ball", {{"radius", std::get<BallSupport>(s.support()).radius}}}};
        for (const auto& p : s.density3()) density.push_back(detail::polynomial_json<3>(p));
    } else {
        if (const auto* d = std::get_if<DiskSupport>(&s.support())) {
            j["support"] = {{"disk", {{"center", {d->center.x(), d->center.y()}}, {"radius", d->radius}}}};
        } else {
            json pts = json::array();
            for (const Vec2& v : s.polygon().vertices()) pts.push_back({v.x(), v.y()});
            j["support"] = {{"polygon", pts}};
        }
        for (const auto& p : s.density()) density.push_back(detail::polynomial_json<2>(p));
    }
    j["density"] = density;
    return j;
}

/// Prism document for the dimension reduction check:
/// {lambda, mu, omega, convention, chart: {opening, h}, cutoff: {L, center, width},
///  core: [3 polynomials], source: [3 polynomials], xi: [...], s_grid: [...]}
struct PrismConfig {
    LameParameters material{1.0, 1.0, 3};
    double omega = 0.0;
    OperatorConvention convention = OperatorConvention::Paper;
    CornerChart chart;
    DimensionReductionSpec cutoff;
    PolyVec<3> core;
    PolyVec<3> source;
    std::vector<double> xi;
    std::vector<double> s_grid = default_s_grid();
};

inline std::vector<double> parse_number_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(detail::number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline PrismConfig parse_prism(const json& j) {
    detail::reject_unknown(j, "prism",
                           {"lambda", "mu", "omega", "convention", "chart", "cutoff", "core", "source", "xi", "s_grid"});
    PrismConfig c;
    const double lambda = detail::number(detail::require(j, "prism", "lambda"), "prism.lambda");
    const double mu = detail::number(detail::require(j, "prism", "mu"), "prism.mu");
    try {
        c.material = LameParameters(lambda, mu, 3);
    } catch (const ConvexityError& e) {
        throw ParseError(std::string(mu > 0.0 ? "prism.lambda" : "prism.mu") + ": " + e.what());
    }
    if (j.contains("omega")) {
        c.omega = detail::number(j.at("omega"), "prism.omega");
        if (c.omega < 0.0) throw ParseError("prism.omega: must be non-negative");
    }
    c.convention = detail::parse_convention_field(j, "prism");

    const json& ch = detail::require(j, "prism", "chart");
    detail::reject_unknown(ch, "prism.chart", {"opening", "h"});
    try {
        c.chart = synthetic_chart(detail::number(detail::require(ch, "prism.chart", "opening"), "prism.chart.opening"),
                                  detail::number(detail::require(ch, "prism.chart", "h"), "prism.chart.h"));
    } catch (const GeometryError& e) {
        throw ParseError(std::string("prism.chart: ") + e.what());
    }

    if (j.contains("cutoff")) {
        const json& cu = j.at("cutoff");
        detail::reject_unknown(cu, "prism.cutoff", {"L", "center", "width"});
        if (cu.contains("L")) c.cutoff.L = detail::number(cu.at("L"), "prism.cutoff.L");
        if (cu.contains("center")) c.cutoff.center = detail::number(cu.at("center"), "prism.cutoff.center");
        if (cu.contains("width")) c.cutoff.width = detail::number(cu.at("width"), "prism.cutoff.width");
    }
    try {
        c.cutoff.validate();
    } catch (const DomainError& e) {
        throw ParseError(std::string("prism.cutoff: ") + e.what());
    }

    c.core = detail::parse_polyvec<3>(detail::require(j, "prism", "core"), "prism.core");
    if (j.contains("source")) c.source = detail::parse_polyvec<3>(j.at("source"), "prism.source");
    if (j.contains("xi")) c.xi = parse_number_list(j.at("xi"), "prism.xi");
    if (j.contains("s_grid")) c.s_grid = parse_number_list(j.at("s_grid"), "prism.s_grid");
    return c;
}

inline PrismConfig load_prism(const std::string& path) { return parse_prism(parse_json_text(read_text_file(path), path)); }

/// Shortest decimal form that round-trips.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

/// dir_x, dir_y[, dir_z], then Re/Im of each u_p^inf and u_s^inf component, |u_p|, |u_s|.
inline void write_farfield_csv(std::ostream& os, const FarFieldPattern& p) {
    const char* axes[] = {"x", "y", "z"};
    const int d = p.dim;
    for (int k = 0; k < d; ++k) os << (k ? "," : "") << "dir_" << axes[k];
    for (const char* f : {"up", "us"})
        for (int k = 0; k < d; ++k) os << ',' << f << '_' << axes[k] << "_re," << f << '_' << axes[k] << "_im";
    os << ",abs_up,abs_us\n";
    for (std::size_t i = 0; i < p.directions.size(); ++i) {
        for (int k = 0; k < d; ++k) os << (k ? "," : "") << format_number(p.directions[i](k));
        for (const CVecX* v : {&p.up_inf[i], &p.us_inf[i]})
            for (int k = 0; k < d; ++k) os << ',' << format_number((*v)(k).real()) << ',' << format_number((*v)(k).imag());
        os << ',' << format_number(p.up_inf[i].norm()) << ',' << format_number(p.us_inf[i].norm()) << '\n';
    }
}

/// s, |W|, arg W.
inline void write_witness_csv(std::ostream& os, const WitnessSweep& w) {
    os << "s,abs_W,arg_W\n";
    for (std::size_t i = 0; i < w.s_grid.size(); ++i)
        os << format_number(w.s_grid[i]) << ',' << format_number(std::abs(w.values[i])) << ','
           << format_number(std::arg(w.values[i])) << '\n';
}

inline json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline json real_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json complex_list_json(const std::vector<cplx>& v) {
    json a = json::array();
    for (const cplx& z : v) a.push_back(complex_json(z));
    return a;
}

inline json to_json(const MomentExtraction& m) {
    return {{"s_grid", m.s_grid},
            {"scaled_moments", complex_list_json(m.scaled_moments)},
            {"profile", complex_list_json(m.profile)},
            {"fitted_limit", complex_json(m.fitted_limit)},
            {"corner_constant", complex_json(m.corner_constant)},
            {"estimate", complex_json(m.estimate)},
            {"rotation", m.rotation},
            {"normalized_limit", complex_json(m.global_estimate())},
            {"decay_slope", real_json(m.decay_slope)},
            {"fit_residual", m.fit_residual}};
}

inline json to_json(const WitnessSweep& w) {
    return {{"s_grid", w.s_grid},
            {"values", complex_list_json(w.values)},
            {"source_channel", complex_list_json(w.source_channel)},
            {"field_channel", complex_list_json(w.field_channel)},
            {"fitted_limit", complex_json(w.fitted_limit)},
            {"source_limit", complex_json(w.source_limit)},
            {"field_limit", complex_json(w.field_limit)},
            {"decay_exponent", real_json(w.decay_exponent)},
            {"corner_constant", complex_json(w.corner_constant)},
            {"corner_value", complex_json(w.corner_value)},
            {"discrepancy", w.discrepancy},
            {"max_abs_value", w.max_abs_value}};
}

inline json to_json(const NonradiatingReport& r) {
    return {{"omega", r.omega},
            {"A", r.A},
            {"B", r.B},
            {"lambda", r.lambda},
            {"mu", r.mu},
            {"convexity_margin", r.convexity_margin},
            {"max_farfield", r.max_farfield},
            {"oracle_residual", r.oracle_residual}};
}

inline json to_json(const ReducedEquationReport& r) {
    return {{"xi", r.xi},
            {"gamma_residual", r.gamma_residual},
            {"interior_residual", r.interior_residual},
            {"interior_gap", r.interior_gap},
            {"trace_max", r.trace_max},
            {"traction_max", r.traction_max},
            {"scale", r.scale},
            {"samples", r.samples.size()}};
}

inline json to_json(const EdgeDemoReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries) {
        json rec = json::array(), dir = json::array();
        for (int k = 0; k < 3; ++k) {
            rec.push_back(complex_json(e.reconstructed(k)));
            dir.push_back(complex_json(e.direct(k)));
        }
        entries.push_back({{"xi", e.xi},
                           {"reconstructed", rec},
                           {"direct", dir},
                           {"relative_error", e.relative_error},
                           {"absolute_error", e.absolute_error}});
    }
    return {{"entries", entries},
            {"max_relative_error", r.max_relative_error},
            {"max_absolute_error", r.max_absolute_error}};
}

}  // namespace elasticorner
