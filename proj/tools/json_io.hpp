#pragma once

#include <halfdisk/adjunction.hpp>
#include <halfdisk/errors.hpp>
#include <halfdisk/scalar.hpp>
#include <halfdisk/series.hpp>
#include <halfdisk/structures.hpp>

#include <json.hpp>

#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace halfdisk::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline constexpr const char* format_version = "halfdisk/1";

/// Input does not match the expected shape; `pointer` locates the offending value.
class schema_error : public precondition_error {
public:
    schema_error(std::string pointer, const std::string& what)
        : precondition_error(pointer + ": " + what), pointer_(std::move(pointer))
    {
    }
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

inline std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
inline std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

inline const json& require(const json& obj, const std::string& ptr, const char* key)
{
    if (!obj.is_object()) throw schema_error(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw schema_error(child(ptr, key), "missing required field");
    return *it;
}

inline void only_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (auto k : keys) ok = ok || it.key() == k;
        if (!ok) throw schema_error(child(ptr, it.key()), "unknown field");
    }
}

inline long as_int(const json& v, const std::string& ptr, long lo = std::numeric_limits<long>::min())
{
    if (!v.is_number_integer()) throw schema_error(ptr, "expected an integer");
    const long x = v.get<long>();
    if (x < lo) throw schema_error(ptr, "must be at least " + std::to_string(lo));
    return x;
}

inline double as_double(const json& v, const std::string& ptr)
{
    if (!v.is_number()) throw schema_error(ptr, "expected a number");
    return v.get<double>();
}

/// Exact value of a JSON number or a "p/q" / decimal string.
inline rational as_rational(const json& v, const std::string& ptr)
{
    try {
        if (v.is_number_integer()) return rational(v.dump(), 10);
        if (v.is_number_float()) return parse_rational(v.dump());
        if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const std::exception&) {
        throw schema_error(ptr, "not a rational number");
    }
    throw schema_error(ptr, "expected a number or a rational string");
}

inline std::string rational_text(const rational& r) { return to_string(r); }

/// {"dim": d, "order": n, "coeffs": [[c0, c1, ...] per component]}; c = x or [re, im].
inline exact_series parse_series(const json& v, const std::string& ptr, std::optional<int> truncation = {})
{
    if (!v.is_object()) throw schema_error(ptr, "series must be an object");
    only_keys(v, ptr, {"dim", "order", "coeffs"});
    const json& coeffs = require(v, ptr, "coeffs");
    const std::string cptr = child(ptr, "coeffs");
    if (!coeffs.is_array() || coeffs.empty()) throw schema_error(cptr, "expected a nonempty array of components");
    const int dim = v.contains("dim") ? int(as_int(v["dim"], child(ptr, "dim"), 1)) : int(coeffs.size());
    if (dim != int(coeffs.size())) throw schema_error(child(ptr, "dim"), "does not match the number of components");
    std::size_t longest = 0;
    for (std::size_t c = 0; c < coeffs.size(); ++c) {
        if (!coeffs[c].is_array()) throw schema_error(child(cptr, c), "expected an array of coefficients");
        longest = std::max(longest, coeffs[c].size());
    }
    int order = v.contains("order") ? int(as_int(v["order"], child(ptr, "order"), 0))
                                    : std::max(int(longest) - 1, exact_series::default_order);
    if (truncation) order = *truncation;
    exact_series s(dim, order);
    for (std::size_t c = 0; c < coeffs.size(); ++c) {
        const std::string comp = child(cptr, c);
        for (std::size_t k = 0; k < coeffs[c].size(); ++k) {
            const json& e = coeffs[c][k];
            const std::string ep = child(comp, k);
            exact_complex z;
            if (e.is_array()) {
                if (e.size() != 2) throw schema_error(ep, "complex coefficient must be [re, im]");
                z = exact_complex(as_rational(e[0], child(ep, 0)), as_rational(e[1], child(ep, 1)));
            } else {
                z = exact_complex(as_rational(e, ep));
            }
            if (int(k) > order) {
                if (!(z.re == 0 && z.im == 0)) s.mark_exceeded(true);
                continue;
            }
            s.at(int(k), int(c)) = z;
        }
    }
    return s;
}

/// Canonical form: rational strings, [re, im] pairs, trailing zeros dropped.
inline ordered_json series_json(const exact_series& s)
{
    ordered_json out;
    out["dim"] = s.dim();
    out["order"] = s.order();
    ordered_json comps = ordered_json::array();
    for (int c = 0; c < s.dim(); ++c) {
        int last = -1;
        for (int k = 0; k <= s.order(); ++k)
            if (!(s.at(k, c).re == 0 && s.at(k, c).im == 0)) last = k;
        ordered_json comp = ordered_json::array();
        for (int k = 0; k <= last; ++k) comp.push_back({rational_text(s.at(k, c).re), rational_text(s.at(k, c).im)});
        comps.push_back(comp);
    }
    out["coeffs"] = comps;
    return out;
}

inline ordered_json matrix_json(const mat4& m)
{
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < 4; ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < 4; ++j) row.push_back(m(i, j) + 0.0);  // no negative zeros
        rows.push_back(row);
    }
    return rows;
}

/// Seed from the environment when HALFDISK_SEED is set.
inline unsigned long effective_seed(unsigned long flag)
{
    if (const char* env = std::getenv("HALFDISK_SEED")) {
        try {
            return std::stoul(env);
        } catch (const std::exception&) {
            throw precondition_error("HALFDISK_SEED must be a nonnegative integer");
        }
    }
    return flag;
}

inline structure_field named_structure(const std::string& name, const std::string& ptr, std::optional<double> amplitude,
                                       std::optional<double> lipschitz, std::optional<double> c1, double cone, unsigned long seed)
{
    if (name.rfind("blend:", 0) == 0)
        return blend_cones(named_structure(name.substr(6), ptr, amplitude, lipschitz, c1, cone, seed), cone);
    auto build = [&](auto factory) -> structure_field {
        if (lipschitz) return calibrate_lipschitz(factory, *lipschitz);
        if (c1) return calibrate_c1(factory, *c1);
        return factory(amplitude.value_or(0.05));
    };
    if (name == "standard") return standard_field();
    if (name == "eta_example") return eta_example();
    if (name == "tangent_adapted") return build([](double a) { return tangent_adapted_field(a); });
    if (name == "cusp_adapted") return build([](double a) { return cusp_adapted_field(a); });
    if (name == "random_tamed")
        return build([seed](double a) {
            std::mt19937_64 rng(seed);
            return random_tamed_field(rng, a);
        });
    throw schema_error(ptr, "unknown structure '" + name + "'");
}

/// Nearest-neighbour structure from sampled matrices.
inline structure_field sampled_structure(const json& v, const std::string& ptr)
{
    const json& pts = require(v, ptr, "points");
    const json& mats = require(v, ptr, "matrices");
    if (!pts.is_array() || !mats.is_array() || pts.size() != mats.size() || pts.empty())
        throw schema_error(ptr, "points and matrices must be nonempty arrays of equal length");
    std::vector<vec4> p;
    std::vector<mat4> m;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string pp = child(child(ptr, "points"), i), mp = child(child(ptr, "matrices"), i);
        if (!pts[i].is_array() || pts[i].size() != 4) throw schema_error(pp, "expected 4 coordinates");
        if (!mats[i].is_array() || mats[i].size() != 16) throw schema_error(mp, "expected 16 entries (row-major)");
        vec4 z;
        mat4 a;
        for (int k = 0; k < 4; ++k) z[k] = as_double(pts[i][k], child(pp, k));
        for (int k = 0; k < 16; ++k) a(k / 4, k % 4) = as_double(mats[i][k], child(mp, k));
        if (!is_complex_structure(a, 1e-8)) throw schema_error(mp, "matrix does not square to -1");
        p.push_back(z);
        m.push_back(a);
    }
    structure_field f;
    f.eval = [p, m](const vec4& z) -> mat4 {
        std::size_t best = 0;
        for (std::size_t i = 1; i < p.size(); ++i)
            if ((p[i] - z).squaredNorm() < (p[best] - z).squaredNorm()) best = i;
        return m[best];
    };
    f.tag = regularity::lipschitz;
    f.name = "sampled";
    return f;
}

inline structure_field parse_structure(const json& v, const std::string& ptr, unsigned long seed)
{
    if (v.is_string()) return named_structure(v.get<std::string>(), ptr, {}, {}, {}, 1.0, seed);
    if (!v.is_object()) throw schema_error(ptr, "structure must be a name or an object");
    if (v.contains("points")) {
        only_keys(v, ptr, {"points", "matrices"});
        return sampled_structure(v, ptr);
    }
    only_keys(v, ptr, {"name", "amplitude", "lipschitz", "c1", "cone"});
    const json& name = require(v, ptr, "name");
    if (!name.is_string()) throw schema_error(child(ptr, "name"), "expected a string");
    std::optional<double> amp, lip, c1;
    if (v.contains("amplitude")) amp = as_double(v["amplitude"], child(ptr, "amplitude"));
    if (v.contains("lipschitz")) lip = as_double(v["lipschitz"], child(ptr, "lipschitz"));
    if (v.contains("c1")) c1 = as_double(v["c1"], child(ptr, "c1"));
    const double cone = v.contains("cone") ? as_double(v["cone"], child(ptr, "cone")) : 1.0;
    return named_structure(name.get<std::string>(), child(ptr, "name"), amp, lip, c1, cone, seed);
}

inline curve_config parse_config(const json& v, const std::string& ptr)
{
    if (!v.is_object()) throw schema_error(ptr, "expected an object");
    curve_config c;
    c.g = int(as_int(require(v, ptr, "g"), child(ptr, "g"), 0));
    c.sigma = int(as_int(require(v, ptr, "sigma"), child(ptr, "sigma"), 1));
    c.delta_b = int(as_int(require(v, ptr, "delta_b"), child(ptr, "delta_b"), 0));
    c.delta_i = int(as_int(require(v, ptr, "delta_i"), child(ptr, "delta_i"), 0));
    c.kappa_i = int(as_int(require(v, ptr, "kappa_i"), child(ptr, "kappa_i"), 0));
    c.normal_maslov = as_int(require(v, ptr, "normal_maslov"), child(ptr, "normal_maslov"));
    c.maslov_total = v.contains("maslov_total") ? as_int(v["maslov_total"], child(ptr, "maslov_total"))
                                                : maslov_sum(c.normal_maslov, maslov_tangent(c.g, c.sigma));
    c.double_sq = v.contains("double_sq") ? as_int(v["double_sq"], child(ptr, "double_sq")) : consistent_double_sq(c);
    return c;
}

inline ordered_json config_json(const curve_config& c)
{
    ordered_json o;
    o["g"] = c.g;
    o["sigma"] = c.sigma;
    o["delta_b"] = c.delta_b;
    o["delta_i"] = c.delta_i;
    o["kappa_i"] = c.kappa_i;
    o["normal_maslov"] = c.normal_maslov;
    o["maslov_total"] = c.maslov_total;
    o["double_sq"] = c.double_sq;
    return o;
}

}  // namespace halfdisk::io
