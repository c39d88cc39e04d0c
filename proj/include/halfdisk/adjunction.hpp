#pragma once

#include <halfdisk/errors.hpp>

#include <random>
#include <string>
#include <vector>

namespace halfdisk {

/// Integer invariants of a curve with totally real boundary.
struct curve_config {
    int g = 0;
    int sigma = 1;
    int delta_b = 0;
    int delta_i = 0;
    int kappa_i = 0;
    long normal_maslov = 0;
    long maslov_total = 0;
    long double_sq = 0;

    bool operator==(const curve_config&) const = default;
};

inline long maslov_tangent(int g, int sigma)
{
    if (g < 0 || sigma < 1) throw precondition_error("maslov_tangent: need g >= 0 and sigma >= 1");
    return 4 - 4L * g - 2L * sigma;
}

inline long maslov_sum(long m1, long m2) { return m1 + m2; }

inline long euler_characteristic(const curve_config& c) { return 2 - 2L * c.g - c.sigma - c.delta_b; }

/// Self-intersection of the double forced by the adjunction identity; reduces to
/// normal + 4 delta_i for immersed curves without boundary nodes.
inline long consistent_double_sq(const curve_config& c)
{
    return c.normal_maslov + 4L * c.delta_i + 4L * c.kappa_i + 2L * c.delta_b;
}

inline void validate(const curve_config& c)
{
    if (c.g < 0 || c.sigma < 1 || c.delta_b < 0 || c.delta_i < 0 || c.kappa_i < 0)
        throw precondition_error("curve config: need g, delta_b, delta_i, kappa_i >= 0 and sigma >= 1");
    if (c.maslov_total != maslov_sum(c.normal_maslov, maslov_tangent(c.g, c.sigma)))
        throw precondition_error("curve config: maslov_total must equal normal_maslov + 4 - 4g - 2 sigma");
}

/// Config with maslov_total and double_sq filled in consistently.
inline curve_config make_config(int g, int sigma, int delta_b, int delta_i, int kappa_i, long normal_maslov)
{
    curve_config c{g, sigma, delta_b, delta_i, kappa_i, normal_maslov, 0, 0};
    if (g < 0 || sigma < 1) throw precondition_error("curve config: need g >= 0 and sigma >= 1");
    c.maslov_total = maslov_sum(normal_maslov, maslov_tangent(g, sigma));
    c.double_sq = consistent_double_sq(c);
    validate(c);
    return c;
}

struct adjunction_verdict {
    long lhs = 0;  ///< 2g + sigma
    long rhs = 0;  ///< (double_sq - maslov_total)/2 + 2 - delta_b - 2 delta_i - 2 kappa_i
    bool equal() const { return lhs == rhs; }
    long gap() const { return lhs - rhs; }
};

inline adjunction_verdict check_adjunction(const curve_config& c)
{
    validate(c);
    const long d = c.double_sq - c.maslov_total;
    if (d % 2 != 0) throw precondition_error("inconsistent configuration: double_sq - maslov_total is odd");
    adjunction_verdict v;
    v.lhs = 2L * c.g + c.sigma;
    v.rhs = d / 2 + 2 - c.delta_b - 2L * c.delta_i - 2L * c.kappa_i;
    return v;
}

/// How a boundary surgery redistributes topology: a new boundary circle, or a handle
/// joining two circles. Both keep the Euler characteristic.
enum class surgery_variant { add_circle, add_handle };

inline const char* to_string(surgery_variant v) { return v == surgery_variant::add_circle ? "add_circle" : "add_handle"; }

inline curve_config move_cusp_to_nodes(curve_config c, int k)
{
    if (k < 0 || c.kappa_i < k) throw precondition_error("cusp_to_nodes: insufficient interior cusp index");
    c.kappa_i -= k;
    c.delta_i += k;
    return c;
}

inline curve_config move_node_to_handle(curve_config c)
{
    if (c.delta_i < 1) throw precondition_error("node_to_handle: no interior double point");
    c.delta_i -= 1;
    c.g += 1;
    c.normal_maslov += 4;
    return c;
}

inline curve_config move_boundary_surgery(curve_config c, surgery_variant v = surgery_variant::add_circle)
{
    if (c.delta_b < 1) throw precondition_error("boundary_surgery: no boundary double point");
    if (v == surgery_variant::add_handle && c.sigma < 2) throw precondition_error("boundary_surgery: handle variant needs two circles");
    c.delta_b -= 1;
    if (v == surgery_variant::add_circle) {
        c.sigma += 1;
    } else {
        c.g += 1;
        c.sigma -= 1;
    }
    c.normal_maslov += 2;  // tangent part drops by 2, total stays
    return c;
}

// inverses, used to walk away from embedded seeds

inline curve_config move_nodes_to_cusp(curve_config c, int k)
{
    if (k < 0 || c.delta_i < k) throw precondition_error("nodes_to_cusp: insufficient interior double points");
    c.delta_i -= k;
    c.kappa_i += k;
    return c;
}

inline curve_config move_handle_to_node(curve_config c)
{
    if (c.g < 1) throw precondition_error("handle_to_node: genus is zero");
    c.g -= 1;
    c.delta_i += 1;
    c.normal_maslov -= 4;
    return c;
}

inline curve_config move_boundary_unsurgery(curve_config c, surgery_variant v = surgery_variant::add_circle)
{
    if (v == surgery_variant::add_circle && c.sigma < 2) throw precondition_error("boundary_unsurgery: need two boundary circles");
    if (v == surgery_variant::add_handle && c.g < 1) throw precondition_error("boundary_unsurgery: genus is zero");
    c.delta_b += 1;
    if (v == surgery_variant::add_circle) {
        c.sigma -= 1;
    } else {
        c.g -= 1;
        c.sigma += 1;
    }
    c.normal_maslov -= 2;
    return c;
}

enum class move_kind { cusp_to_nodes, node_to_handle, boundary_surgery, nodes_to_cusp, handle_to_node, boundary_unsurgery };

inline const char* to_string(move_kind m)
{
    switch (m) {
    case move_kind::cusp_to_nodes: return "cusp_to_nodes";
    case move_kind::node_to_handle: return "node_to_handle";
    case move_kind::boundary_surgery: return "boundary_surgery";
    case move_kind::nodes_to_cusp: return "nodes_to_cusp";
    case move_kind::handle_to_node: return "handle_to_node";
    case move_kind::boundary_unsurgery: return "boundary_unsurgery";
    }
    return "?";
}

struct move_step {
    move_kind kind;
    int k = 0;  ///< cusp index for the cusp moves
    surgery_variant variant = surgery_variant::add_circle;
    curve_config after;
};

/// Uniformly random applicable move (forward or inverse).
inline move_step random_move(const curve_config& c, std::mt19937_64& rng)
{
    std::vector<move_step> options;
    auto add = [&](move_kind kind, int k, surgery_variant v) { options.push_back({kind, k, v, c}); };
    if (c.kappa_i > 0) add(move_kind::cusp_to_nodes, 0, {});
    if (c.delta_i > 0) add(move_kind::node_to_handle, 0, {}), add(move_kind::nodes_to_cusp, 0, {});
    if (c.delta_b > 0) add(move_kind::boundary_surgery, 0, surgery_variant::add_circle);
    if (c.delta_b > 0 && c.sigma >= 2) add(move_kind::boundary_surgery, 0, surgery_variant::add_handle);
    if (c.g > 0) add(move_kind::handle_to_node, 0, {}), add(move_kind::boundary_unsurgery, 0, surgery_variant::add_handle);
    if (c.sigma >= 2) add(move_kind::boundary_unsurgery, 0, surgery_variant::add_circle);
    if (options.empty()) throw precondition_error("no move applies to this configuration");
    move_step s = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    auto pick = [&](int hi) { return std::uniform_int_distribution<int>(1, hi)(rng); };
    switch (s.kind) {
    case move_kind::cusp_to_nodes: s.k = pick(c.kappa_i); s.after = move_cusp_to_nodes(c, s.k); break;
    case move_kind::nodes_to_cusp: s.k = pick(c.delta_i); s.after = move_nodes_to_cusp(c, s.k); break;
    case move_kind::node_to_handle: s.after = move_node_to_handle(c); break;
    case move_kind::handle_to_node: s.after = move_handle_to_node(c); break;
    case move_kind::boundary_surgery: s.after = move_boundary_surgery(c, s.variant); break;
    case move_kind::boundary_unsurgery: s.after = move_boundary_unsurgery(c, s.variant); break;
    }
    return s;
}

/// Signs of the non-degenerate zeros of a section along the curve.
struct section_zero_data {
    std::vector<int> interior;
    std::vector<int> boundary;
};

inline void validate(const section_zero_data& z)
{
    for (int s : z.interior)
        if (s != 1 && s != -1) throw precondition_error("zero signs must be +1 or -1");
    for (int s : z.boundary)
        if (s != 1 && s != -1) throw precondition_error("zero signs must be +1 or -1");
}

/// Interior zeros count twice, boundary zeros once.
inline long maslov_from_zeros(const section_zero_data& z)
{
    validate(z);
    long m = 0;
    for (int s : z.interior) m += 2 * s;
    for (int s : z.boundary) m += s;
    return m;
}

/// Signed zero count of the doubled section: each interior zero and its mirror image.
inline long double_chern_count(const section_zero_data& z)
{
    validate(z);
    if (!z.boundary.empty()) throw precondition_error("doubling needs a section without boundary zeros");
    std::vector<int> doubled = z.interior;
    doubled.insert(doubled.end(), z.interior.begin(), z.interior.end());
    long c = 0;
    for (int s : doubled) c += s;
    return c;
}

}  // namespace halfdisk
