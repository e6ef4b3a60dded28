#pragma once

// JSON conversions for the public types and a small CSV writer.

#include "bellshape/amcm.hpp"
#include "bellshape/errors.hpp"
#include "bellshape/exact/rational.hpp"
#include "bellshape/exactdiff.hpp"
#include "bellshape/pff.hpp"
#include "bellshape/phi.hpp"
#include "bellshape/transform.hpp"
#include "bellshape/whale.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace bellshape::io {

using json = nlohmann::json;

/// Fixed 17-significant-digit rendering used for every CSV float.
inline std::string fmt(double v) {
    char buf[40];
    if (v == 0.0) v = 0.0;  // drop the sign of zero
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os) { row(header); }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
        os_ << '\n';
    }

private:
    std::ostream& os_;
};

namespace detail {

inline double num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw StructuralError(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

inline double num_req(const json& j, const char* key) {
    if (!j.contains(key)) throw StructuralError(std::string("missing field '") + key + "'");
    return num(j, key, 0.0);
}

inline std::string str(const json& j, const char* key, const std::string& fallback = {}) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string()) throw StructuralError(std::string("field '") + key + "' must be a string");
    return j.at(key).get<std::string>();
}

}  // namespace detail

/// Exact rational from a JSON string ("1/3", "0.25") or number (its binary value).
inline mpq_class rational_from_json(const json& j) {
    if (j.is_string()) return exact::parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (j.is_number()) return exact::from_double(j.get<double>());
    throw StructuralError("expected a rational as string or number");
}

inline exact::ParsedRational rational_pi_from_json(const json& j) {
    if (j.is_string()) return exact::parse_rational_pi(j.get<std::string>());
    const mpq_class v = rational_from_json(j);
    return {v, true, j.dump()};
}

// ---- phi ----

inline Tail tail_from_json(const json& j) {
    const std::string kind = detail::str(j, "kind", "constant");
    if (kind == "constant") return Tail::constant(detail::num(j, "value", 0.0));
    if (kind == "affine") return Tail::affine(detail::num(j, "slope", 0.0), detail::num(j, "intercept", 0.0));
    if (kind == "power") return Tail::power(detail::num_req(j, "coef"), detail::num_req(j, "exponent"), detail::num(j, "offset", 0.0));
    throw StructuralError("unknown tail kind '" + kind + "'");
}

inline json tail_to_json(const Tail& t) {
    switch (t.kind) {
        case Tail::Kind::Constant: return {{"kind", "constant"}, {"value", t.value}};
        case Tail::Kind::Affine: return {{"kind", "affine"}, {"slope", t.slope}, {"intercept", t.intercept}};
        case Tail::Kind::Power: return {{"kind", "power"}, {"coef", t.coef}, {"exponent", t.exponent}, {"offset", t.offset}};
    }
    return {};
}

inline PhiFunction phi_from_json(const json& j) {
    if (!j.is_object()) throw StructuralError("phi must be an object");
    std::vector<double> knots{0.0};
    if (j.contains("knots")) knots = j.at("knots").get<std::vector<double>>();
    std::vector<Piece> pieces;
    if (j.contains("pieces"))
        for (const auto& p : j.at("pieces")) pieces.push_back({detail::num(p, "slope", 0.0), detail::num(p, "intercept", 0.0)});
    std::vector<Step> steps;
    if (j.contains("steps"))
        for (const auto& s : j.at("steps")) steps.push_back({detail::num_req(s, "at"), detail::num(s, "weight", 1.0)});
    const Tail left = j.contains("left_tail") ? tail_from_json(j.at("left_tail")) : Tail::constant(0.0);
    const Tail right = j.contains("right_tail") ? tail_from_json(j.at("right_tail")) : Tail::constant(0.0);
    return PhiFunction(knots, pieces, left, right, steps);
}

inline json phi_to_json(const PhiFunction& phi) {
    json j;
    j["knots"] = phi.knots();
    j["pieces"] = json::array();
    for (const auto& p : phi.pieces()) j["pieces"].push_back({{"slope", p.slope}, {"intercept", p.intercept}});
    j["left_tail"] = tail_to_json(phi.left_tail());
    j["right_tail"] = tail_to_json(phi.right_tail());
    j["steps"] = json::array();
    for (const auto& s : phi.steps()) j["steps"].push_back({{"at", s.at}, {"weight", s.weight}});
    return j;
}

// ---- bell params ----

/// {"preset": "cauchy"} | {"preset": "gaussian", "t": 1} | {a, b, c or c_int, phi}.
inline BellParams params_from_json(const json& j) {
    if (!j.is_object()) throw StructuralError("params must be an object");
    const std::string preset = detail::str(j, "preset");
    if (preset == "cauchy") return cauchy_params();
    if (preset == "gaussian") return gaussian_params(detail::num(j, "t", 1.0));
    if (!preset.empty()) throw StructuralError("unknown preset '" + preset + "'");
    const PhiFunction phi = j.contains("phi") ? phi_from_json(j.at("phi")) : PhiFunction::zero();
    const double a = detail::num(j, "a", 0.0), b = detail::num(j, "b", 0.0);
    if (j.contains("c_int")) {
        if (j.contains("c")) throw StructuralError("give either c or c_int, not both");
        return from_integrable(a, b, detail::num(j, "c_int", 0.0), phi);
    }
    return BellParams{a, b, detail::num(j, "c", 0.0), phi};
}

inline json params_to_json(const BellParams& p) {
    return {{"a", p.a}, {"b", p.b}, {"c", p.c}, {"phi", phi_to_json(p.phi)}};
}

// ---- pff ----

inline PolyaFrequency pff_from_json(const json& j) {
    PolyaFrequency h;
    h.a = detail::num(j, "a", 0.0);
    h.b = detail::num(j, "b", 0.0);
    if (j.contains("atoms")) h.atoms = j.at("atoms").get<std::vector<double>>();
    h.check();
    return h;
}

inline json pff_to_json(const PolyaFrequency& h) { return {{"a", h.a}, {"b", h.b}, {"atoms", h.atoms}}; }

// ---- amcm ----

inline BernsteinMeasure measure_from_json(const json& j) {
    std::vector<MeasureAtom> atoms;
    if (j.contains("atoms"))
        for (const auto& a : j.at("atoms")) atoms.push_back({detail::num_req(a, "location"), detail::num_req(a, "mass")});
    std::vector<double> knots, values;
    if (j.contains("density")) {
        knots = j.at("density").at("knots").get<std::vector<double>>();
        values = j.at("density").at("values").get<std::vector<double>>();
    }
    return BernsteinMeasure(atoms, knots, values);
}

inline json measure_to_json(const BernsteinMeasure& m) {
    json j;
    j["atoms"] = json::array();
    for (const auto& a : m.atoms()) j["atoms"].push_back({{"location", a.location}, {"mass", a.mass}});
    if (m.has_density()) j["density"] = {{"knots", m.density_knots()}, {"values", m.density_values()}};
    return j;
}

inline AmCmFunction amcm_from_json(const json& j) {
    AmCmFunction g;
    if (j.contains("mu_plus")) g.mu_plus = measure_from_json(j.at("mu_plus"));
    if (j.contains("mu_minus")) g.mu_minus = measure_from_json(j.at("mu_minus"));
    g.m = detail::num(j, "m", 0.0);
    g.check();
    return g;
}

inline json amcm_to_json(const AmCmFunction& g) {
    return {{"mu_plus", measure_to_json(g.mu_plus)}, {"mu_minus", measure_to_json(g.mu_minus)}, {"m", g.m}};
}

// ---- exact densities ----

inline IntPoly int_poly_from_json(const json& coeffs, mpq_class* scale) {
    std::vector<mpq_class> c;
    for (const auto& v : coeffs) c.push_back(rational_from_json(v));
    const auto sp = ScaledPoly::from_rationals(c);
    *scale = sp.scale;
    return sp.poly;
}

inline WhaleSpec whale_from_json(const json& j);

/// {"family": "gaussian" | "cauchy" | "levy" | "exp_inverse" | "rational" | "shift" | "exp_sum" | "whale", ...}
inline ExactDensity density_from_json(const json& j) {
    if (!j.is_object()) throw StructuralError("density must be an object");
    const std::string fam = detail::str(j, "family");
    if (fam == "gaussian") return ExactDensity::gaussian();
    if (fam == "cauchy") return ExactDensity::cauchy();
    if (fam == "levy") return ExactDensity::levy();
    if (fam == "exp_inverse") return ExactDensity::exp_inverse();
    if (fam == "rational") {
        std::vector<mpq_class> nc;
        for (const auto& v : j.value("numerator", json::array({1}))) nc.push_back(rational_from_json(v));
        ScaledPoly num = ScaledPoly::from_rationals(nc);
        IntPoly den = IntPoly::constant(1);
        if (!j.contains("denominator_factors")) throw StructuralError("rational density: missing denominator_factors");
        for (const auto& fct : j.at("denominator_factors")) {
            mpq_class s;
            const IntPoly p = int_poly_from_json(fct.at("coeffs"), &s);
            if (s < 0) throw StructuralError("rational density: denominator factors must be positive");
            const long pw = fct.value("power", 1L);
            if (pw < 1) throw StructuralError("rational density: factor powers must be positive");
            for (long i = 0; i < pw; ++i) {
                den = den * p;
                num.scale /= s;
            }
        }
        return ExactDensity::rational(num, den, static_cast<int>(j.value("power", 1L)), detail::str(j, "name", "rational"));
    }
    if (fam == "shift") {
        if (!j.contains("base") || !j.contains("p")) throw StructuralError("shift density: needs base and p");
        const auto p = rational_pi_from_json(j.at("p"));
        return ExactDensity::shift(density_from_json(j.at("base")), p.value, p.text);
    }
    if (fam == "exp_sum") {
        std::vector<ExpTerm> terms;
        for (const auto& t : j.at("terms")) terms.push_back({rational_from_json(t.at("coef")), rational_from_json(t.at("rate"))});
        return ExactDensity::exp_sum(std::move(terms));
    }
    if (fam == "whale") return whale_build(whale_from_json(j));
    throw StructuralError("unknown density family '" + fam + "'");
}

inline json density_to_json(const ExactDensity& f) {
    using K = ExactDensity::Kind;
    switch (f.kind()) {
        case K::Gaussian: return {{"family", "gaussian"}};
        case K::Levy: return {{"family", "levy"}};
        case K::ExpInverse: return {{"family", "exp_inverse"}};
        case K::Rational: {
            if (f.name() == "cauchy") return {{"family", "cauchy"}};
            json num = json::array(), den = json::array();
            for (const auto& c : f.numerator().rational_coeffs()) num.push_back(c.get_str());
            for (const auto& c : f.base_poly().coeffs()) den.push_back(c.get_str());
            return {{"family", "rational"}, {"numerator", num}, {"denominator_factors", {{{"coeffs", den}, {"power", 1}}}}, {"power", f.power()}};
        }
        case K::Shift: return {{"family", "shift"}, {"base", density_to_json(f.base())}, {"p", f.p_text()}};
        case K::ExpSum: {
            json terms = json::array();
            for (const auto& t : f.terms()) terms.push_back({{"coef", t.coef.get_str()}, {"rate", t.rate.get_str()}});
            return {{"family", "exp_sum"}, {"terms", terms}};
        }
    }
    return {};
}

inline WhaleSpec whale_from_json(const json& j) {
    WhaleSpec s;
    if (j.contains("rates"))
        for (const auto& r : j.at("rates")) s.rates.push_back(rational_from_json(r));
    if (j.contains("cm_part"))
        for (const auto& a : j.at("cm_part")) s.cm_part.push_back({rational_from_json(a.at("location")), rational_from_json(a.value("mass", json(1)))});
    s.check();
    return s;
}

inline json whale_to_json(const WhaleSpec& s) {
    json rates = json::array(), cm = json::array();
    for (const auto& r : s.rates) rates.push_back(r.get_str());
    for (const auto& a : s.cm_part) cm.push_back({{"location", a.location.get_str()}, {"mass", a.mass.get_str()}});
    return {{"rates", rates}, {"cm_part", cm}};
}

}  // namespace bellshape::io
