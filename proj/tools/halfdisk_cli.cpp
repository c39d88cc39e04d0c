#include "json_io.hpp"

#include <halfdisk/adjunction.hpp>
#include <halfdisk/comparison.hpp>
#include <halfdisk/intersection.hpp>
#include <halfdisk/normal_form.hpp>
#include <halfdisk/solver.hpp>
#include <halfdisk/structures.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace halfdisk;
using io::json;
using io::ordered_json;
using io::schema_error;

namespace {

struct options {
    std::string file;
    std::optional<int> truncation;
    std::optional<double> radius;
    int samples = 512;
    int threads = 1;
    std::string method = "series";
    int grid = 64;
    double tol = 1e-6;
    int max_iter = 60;
    unsigned long seed = 1;
    bool pretty = false;
    bool emit_input = false;
    std::string dump;
    // maslov
    bool tangent = false;
    int genus = 0;
    int sigma = 1;
    // adjunction
    int random_moves = 0;
};

const char* kinds[] = {"index", "tangency", "compare", "perturb", "smooth-cusp", "adjunction", "maslov", "reflect"};

json load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw precondition_error("cannot read problem file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw schema_error("", std::string("invalid JSON: ") + e.what());
    }
}

/// Returns the payload after checking the envelope.
const json& envelope(const json& doc, const std::string& kind)
{
    if (!doc.is_object()) throw schema_error("", "problem file must be an object");
    io::only_keys(doc, "", {"version", "kind", "payload"});
    const json& ver = io::require(doc, "", "version");
    if (ver != io::format_version) throw schema_error("/version", std::string("expected \"") + io::format_version + "\"");
    const json& k = io::require(doc, "", "kind");
    if (!k.is_string() || k.get<std::string>() != kind) throw schema_error("/kind", "expected \"" + kind + "\"");
    const json& p = io::require(doc, "", "payload");
    if (!p.is_object()) throw schema_error("/payload", "expected an object");
    return p;
}

ordered_json wrap(const std::string& kind, ordered_json payload)
{
    ordered_json o;
    o["version"] = io::format_version;
    o["kind"] = kind;
    o["payload"] = std::move(payload);
    return o;
}

ordered_json w0_json(const std::array<double, 2>& w) { return ordered_json::array({w[0] + 0.0, w[1] + 0.0}); }

ordered_json structure_echo(const json& v) { return ordered_json::parse(v.dump()); }

// pair problems: index, tangency, compare

struct pair_problem {
    exact_series u1, u2;
};

pair_problem parse_pair(const json& p, const options& o)
{
    io::only_keys(p, "/payload", {"u1", "u2"});
    return {io::parse_series(io::require(p, "/payload", "u1"), "/payload/u1", o.truncation),
            io::parse_series(io::require(p, "/payload", "u2"), "/payload/u2", o.truncation)};
}

ordered_json pair_payload(const pair_problem& q)
{
    ordered_json o;
    o["u1"] = io::series_json(q.u1);
    o["u2"] = io::series_json(q.u2);
    return o;
}

ordered_json index_report_json(const index_report& r)
{
    ordered_json o;
    o["index"] = r.index;
    o["transverse"] = r.transverse;
    o["contact"] = to_string(r.kind);
    if (r.method == "series") {
        o["nu"] = r.nu ? ordered_json(*r.nu) : ordered_json(nullptr);
        o["d"] = r.d ? ordered_json(*r.d) : ordered_json(nullptr);
    } else {
        o["linking_value"] = r.linking_value;
        o["residual"] = r.residual;
        o["sphere_radius"] = r.sphere_radius;
        o["halvings"] = r.halvings;
        o["samples"] = r.samples;
    }
    return o;
}

ordered_json run_index(const pair_problem& q, const options& o)
{
    if (o.method != "series" && o.method != "linking" && o.method != "both")
        throw precondition_error("--method must be series, linking or both");
    ordered_json out;
    std::optional<index_report> s, l;
    if (o.method != "linking") s = boundary_index_series(q.u1, q.u2);
    if (o.method != "series") {
        linking_options lo;
        lo.radius = o.radius;
        lo.samples = o.samples;
        lo.threads = o.threads;
        l = boundary_index_linking(q.u1, q.u2, lo);
    }
    out["index"] = s ? s->index : l->index;
    if (s && l) out["agree"] = s->index == l->index;
    if (s) out["series"] = index_report_json(*s);
    if (l) out["linking"] = index_report_json(*l);
    return out;
}

ordered_json run_tangency(const pair_problem& q)
{
    auto t = tangency_order(q.u1, q.u2);
    ordered_json out;
    out["d"] = t.d ? ordered_json(*t.d) : ordered_json(nullptr);
    out["infinite"] = t.infinite();
    out["contact"] = to_string(t.kind);
    out["valid_order"] = t.valid_order;
    return out;
}

ordered_json run_compare(const pair_problem& q)
{
    auto c = compare(q.u1, q.u2);
    ordered_json out;
    out["mu"] = c.mu;
    out["reparametrization"] = c.reparametrization();
    out["nu"] = c.nu ? ordered_json(*c.nu) : ordered_json(nullptr);
    out["contact"] = to_string(c.kind);
    out["steps"] = c.steps;
    out["psi"] = io::series_json(c.psi);
    if (c.nu) {
        out["w"] = io::series_json(c.w);
        out["w0"] = ordered_json::array({io::rational_text(c.w0[0]), io::rational_text(c.w0[1])});
    }
    return out;
}

// perturb and smooth-cusp

solve_config solver_options(const options& o)
{
    solve_config cfg;
    cfg.cells_per_unit = o.grid;
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    return cfg;
}

half_disk_series<float_complex> float_germ(const exact_series& s, const std::string& ptr)
{
    try {
        return half_disk_series<float_complex>(to_float(s));
    } catch (const precondition_error& e) {
        throw schema_error(ptr, e.what());
    }
}

ordered_json solve_json(const solve_result& r)
{
    ordered_json out;
    out["mu"] = r.mu;
    out["nu"] = r.nu;
    out["w0"] = w0_json(r.w0);
    out["scale"] = r.scale;
    out["rescales"] = r.rescales;
    out["iterations"] = r.iterations;
    out["max_ratio"] = r.max_ratio;
    out["ratios"] = r.ratios;
    out["discrete_residual"] = r.discrete_residual;
    out["fd_residual"] = r.fd_residual;
    out["fixed_point_residual"] = r.fixed_point_residual;
    out["reality_residual"] = r.reality_residual;
    out["origin_error"] = r.origin_error;
    out["w_sup"] = r.w_sup;
    out["stability"] = r.stability;
    out["r_bound_ratio"] = r.r_bound_ratio;
    out["grid"] = {{"h", r.grid->h()}, {"nodes", r.grid->nodes().size()}};
    return out;
}

void dump_grid(const solve_result& r, const std::string& path)
{
    ordered_json d;
    d["h"] = r.grid->h();
    ordered_json pts = ordered_json::array(), vals = ordered_json::array();
    for (auto k : r.grid->nodes()) {
        const cplx z = r.grid->point(k);
        pts.push_back({z.real(), z.imag()});
        const vec4& w = r.w[k];
        vals.push_back({{w[0], w[1]}, {w[2], w[3]}});
    }
    d["points"] = pts;
    d["values"] = vals;
    std::ofstream out(path);
    if (!out) throw precondition_error("cannot write dump file '" + path + "'");
    out << d.dump() << "\n";
}

struct perturb_problem {
    exact_series u0;
    json structure;
    int nu = 1;
    std::array<double, 2> w0{0, 0};
};

perturb_problem parse_perturb(const json& p, const options& o)
{
    io::only_keys(p, "/payload", {"u0", "structure", "nu", "w0"});
    perturb_problem q;
    q.u0 = io::parse_series(io::require(p, "/payload", "u0"), "/payload/u0", o.truncation);
    q.structure = p.contains("structure") ? p["structure"] : json("standard");
    if (p.contains("nu")) q.nu = int(io::as_int(p["nu"], "/payload/nu", 0));
    const json& w = io::require(p, "/payload", "w0");
    if (!w.is_array() || w.size() != 2) throw schema_error("/payload/w0", "expected [w1, w2]");
    q.w0 = {io::as_double(w[0], "/payload/w0/0"), io::as_double(w[1], "/payload/w0/1")};
    return q;
}

ordered_json perturb_payload(const perturb_problem& q)
{
    ordered_json o;
    o["u0"] = io::series_json(q.u0);
    o["structure"] = structure_echo(q.structure);
    o["nu"] = q.nu;
    o["w0"] = w0_json(q.w0);
    return o;
}

ordered_json run_perturb(const perturb_problem& q, const options& o)
{
    auto j = io::parse_structure(q.structure, "/payload/structure", io::effective_seed(o.seed));
    auto cfg = solver_options(o);
    cfg.nu = q.nu;
    cfg.w0 = q.w0;
    auto r = solve_perturbation(float_germ(q.u0, "/payload/u0"), j, cfg);
    if (!o.dump.empty()) dump_grid(r, o.dump);
    return solve_json(r);
}

struct cusp_problem {
    exact_series u0;
    json structure;
    double a = 0;
    double alpha = 0.5;
};

cusp_problem parse_cusp(const json& p, const options& o)
{
    io::only_keys(p, "/payload", {"u0", "structure", "a", "alpha"});
    cusp_problem q;
    q.u0 = io::parse_series(io::require(p, "/payload", "u0"), "/payload/u0", o.truncation);
    q.structure = p.contains("structure") ? p["structure"] : json("standard");
    q.a = io::as_double(io::require(p, "/payload", "a"), "/payload/a");
    if (p.contains("alpha")) q.alpha = io::as_double(p["alpha"], "/payload/alpha");
    return q;
}

ordered_json cusp_payload(const cusp_problem& q)
{
    ordered_json o;
    o["u0"] = io::series_json(q.u0);
    o["structure"] = structure_echo(q.structure);
    o["a"] = q.a;
    o["alpha"] = q.alpha;
    return o;
}

ordered_json run_cusp(const cusp_problem& q, const options& o)
{
    auto j = io::parse_structure(q.structure, "/payload/structure", io::effective_seed(o.seed));
    auto cfg = solver_options(o);
    cfg.alpha = q.alpha;
    ordered_json out;
    if (j.name == "standard") {
        auto an = analytic_cusp_check(half_disk_series<exact_complex>(q.u0), parse_rational(json(q.a).dump()));
        ordered_json g = ordered_json::array();
        for (auto& c : an.gcd) g.push_back(io::rational_text(c));
        out["analytic"] = {{"gcd", g}, {"nonvanishing", an.nonvanishing}};
    }
    auto r = smooth_cusp(float_germ(q.u0, "/payload/u0"), j, q.a, cfg);
    if (!o.dump.empty()) dump_grid(r.solve, o.dump);
    out["radius"] = r.radius;
    out["min_differential"] = r.min_differential;
    out["sigma"] = r.sigma;
    out["C"] = r.c;
    out["a_condition"] = {{"lhs", r.a_lhs}, {"rhs", r.a_rhs}, {"holds", r.a_lhs <= r.a_rhs}};
    out["theoretical_radius"] = r.theoretical_radius;
    out["solve"] = solve_json(r.solve);
    return out;
}

// adjunction

struct move_spec {
    move_kind kind;
    int k = 0;
    surgery_variant variant = surgery_variant::add_circle;
};

struct adjunction_problem {
    curve_config config;
    std::vector<move_spec> moves;
};

adjunction_problem parse_adjunction(const json& p)
{
    io::only_keys(p, "/payload", {"config", "moves"});
    adjunction_problem q;
    q.config = io::parse_config(io::require(p, "/payload", "config"), "/payload/config");
    if (p.contains("moves")) {
        const json& ms = p["moves"];
        if (!ms.is_array()) throw schema_error("/payload/moves", "expected an array");
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const std::string ptr = io::child("/payload/moves", i);
            io::only_keys(ms[i], ptr, {"move", "k", "variant"});
            const json& name = io::require(ms[i], ptr, "move");
            move_spec m;
            bool found = false;
            for (auto kind : {move_kind::cusp_to_nodes, move_kind::node_to_handle, move_kind::boundary_surgery, move_kind::nodes_to_cusp,
                              move_kind::handle_to_node, move_kind::boundary_unsurgery})
                if (name.is_string() && name.get<std::string>() == to_string(kind)) m.kind = kind, found = true;
            if (!found) throw schema_error(ptr + "/move", "unknown move");
            if (ms[i].contains("k")) m.k = int(io::as_int(ms[i]["k"], ptr + "/k", 0));
            if (ms[i].contains("variant")) {
                const json& v = ms[i]["variant"];
                if (v == "add_circle") m.variant = surgery_variant::add_circle;
                else if (v == "add_handle") m.variant = surgery_variant::add_handle;
                else throw schema_error(ptr + "/variant", "expected \"add_circle\" or \"add_handle\"");
            }
            q.moves.push_back(m);
        }
    }
    return q;
}

ordered_json adjunction_payload(const adjunction_problem& q)
{
    ordered_json o;
    o["config"] = io::config_json(q.config);
    if (!q.moves.empty()) {
        ordered_json ms = ordered_json::array();
        for (auto& m : q.moves) {
            ordered_json e;
            e["move"] = to_string(m.kind);
            if (m.kind == move_kind::cusp_to_nodes || m.kind == move_kind::nodes_to_cusp) e["k"] = m.k;
            if (m.kind == move_kind::boundary_surgery || m.kind == move_kind::boundary_unsurgery) e["variant"] = to_string(m.variant);
            ms.push_back(e);
        }
        o["moves"] = ms;
    }
    return o;
}

curve_config apply_move(const curve_config& c, const move_spec& m)
{
    switch (m.kind) {
    case move_kind::cusp_to_nodes: return move_cusp_to_nodes(c, m.k);
    case move_kind::node_to_handle: return move_node_to_handle(c);
    case move_kind::boundary_surgery: return move_boundary_surgery(c, m.variant);
    case move_kind::nodes_to_cusp: return move_nodes_to_cusp(c, m.k);
    case move_kind::handle_to_node: return move_handle_to_node(c);
    case move_kind::boundary_unsurgery: return move_boundary_unsurgery(c, m.variant);
    }
    return c;
}

ordered_json verdict_json(const curve_config& c)
{
    auto v = check_adjunction(c);
    ordered_json o;
    o["verdict"] = v.equal() ? "equal" : "unequal";
    o["lhs"] = v.lhs;
    o["rhs"] = v.rhs;
    o["gap"] = v.gap();
    return o;
}

ordered_json run_adjunction(const adjunction_problem& q, const options& o)
{
    curve_config c = q.config;
    ordered_json steps = ordered_json::array();
    auto record = [&](const char* move, const curve_config& cfg) {
        ordered_json s;
        s["move"] = move;
        s["config"] = io::config_json(cfg);
        s.update(verdict_json(cfg));
        steps.push_back(s);
    };
    for (auto& m : q.moves) {
        c = apply_move(c, m);
        record(to_string(m.kind), c);
    }
    std::mt19937_64 rng(io::effective_seed(o.seed));
    for (int i = 0; i < o.random_moves; ++i) {
        auto s = random_move(c, rng);
        c = s.after;
        record(to_string(s.kind), c);
    }
    ordered_json out;
    out["config"] = io::config_json(c);
    out.update(verdict_json(c));
    out["euler_characteristic"] = euler_characteristic(c);
    out["immersed_double_sq"] = c.kappa_i == 0 && c.delta_b == 0 ? ordered_json(c.normal_maslov + 4L * c.delta_i) : ordered_json(nullptr);
    if (!steps.empty()) out["steps"] = steps;
    return out;
}

// maslov

ordered_json run_maslov_zeros(const section_zero_data& z)
{
    ordered_json out;
    out["maslov"] = maslov_from_zeros(z);
    out["source"] = "zeros";
    out["doubled_chern"] = z.boundary.empty() ? ordered_json(double_chern_count(z)) : ordered_json(nullptr);
    return out;
}

section_zero_data parse_zeros(const json& p)
{
    io::only_keys(p, "/payload", {"interior", "boundary"});
    section_zero_data z;
    for (const char* key : {"interior", "boundary"}) {
        if (!p.contains(key)) continue;
        const std::string ptr = std::string("/payload/") + key;
        if (!p[key].is_array()) throw schema_error(ptr, "expected an array of signs");
        auto& dst = std::string(key) == "interior" ? z.interior : z.boundary;
        for (std::size_t i = 0; i < p[key].size(); ++i) {
            const long s = io::as_int(p[key][i], io::child(ptr, i));
            if (s != 1 && s != -1) throw schema_error(io::child(ptr, i), "sign must be 1 or -1");
            dst.push_back(int(s));
        }
    }
    return z;
}

ordered_json zeros_payload(const section_zero_data& z)
{
    ordered_json o;
    o["interior"] = z.interior;
    o["boundary"] = z.boundary;
    return o;
}

// reflect

struct reflect_problem {
    json structure;
    std::vector<vec4> points;
};

reflect_problem parse_reflect(const json& p)
{
    io::only_keys(p, "/payload", {"structure", "points"});
    reflect_problem q;
    q.structure = io::require(p, "/payload", "structure");
    const json& pts = io::require(p, "/payload", "points");
    if (!pts.is_array() || pts.empty()) throw schema_error("/payload/points", "expected a nonempty array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string ptr = io::child("/payload/points", i);
        if (!pts[i].is_array() || (pts[i].size() != 2 && pts[i].size() != 4)) throw schema_error(ptr, "expected [xi, eta] or 4 coordinates");
        vec4 z = vec4::Zero();
        for (std::size_t k = 0; k < pts[i].size(); ++k) z[int(k)] = io::as_double(pts[i][k], io::child(ptr, k));
        q.points.push_back(z);
    }
    return q;
}

ordered_json reflect_payload(const reflect_problem& q)
{
    ordered_json o;
    o["structure"] = structure_echo(q.structure);
    ordered_json pts = ordered_json::array();
    for (auto& z : q.points) pts.push_back({z[0], z[1], z[2], z[3]});
    o["points"] = pts;
    return o;
}

ordered_json run_reflect(const reflect_problem& q, const options& o)
{
    auto j = io::parse_structure(q.structure, "/payload/structure", io::effective_seed(o.seed));
    auto r = reflect_structure(j);
    ordered_json out = ordered_json::array();
    for (auto& z : q.points) {
        ordered_json e;
        const mat4 m = r(z);
        e["point"] = {z[0] + 0.0, z[1] + 0.0, z[2] + 0.0, z[3] + 0.0};
        e["side"] = z[1] >= 0 ? "upper" : "lower";
        e["J"] = io::matrix_json(m);
        e["is_complex_structure"] = is_complex_structure(m);
        out.push_back(e);
    }
    return {{"structure", r.name}, {"points", out}};
}

void emit(const ordered_json& j, const options& o) { std::cout << (o.pretty ? j.dump(2) : j.dump()) << "\n"; }

int dispatch(const std::string& kind, const options& o)
{
    if (kind == "maslov" && o.tangent) {
        if (!o.file.empty()) throw precondition_error("maslov --tangent takes no problem file");
        ordered_json out;
        out["maslov"] = maslov_tangent(o.genus, o.sigma);
        out["source"] = "tangent";
        out["g"] = o.genus;
        out["sigma"] = o.sigma;
        emit(out, o);
        return 0;
    }
    if (o.file.empty()) throw precondition_error("a problem file is required");
    const json doc = load(o.file);
    const json& p = envelope(doc, kind);
    ordered_json normalized, report;
    if (kind == "index" || kind == "tangency" || kind == "compare") {
        auto q = parse_pair(p, o);
        normalized = pair_payload(q);
        if (!o.emit_input) report = kind == "index" ? run_index(q, o) : kind == "tangency" ? run_tangency(q) : run_compare(q);
    } else if (kind == "perturb") {
        auto q = parse_perturb(p, o);
        normalized = perturb_payload(q);
        if (!o.emit_input) report = run_perturb(q, o);
    } else if (kind == "smooth-cusp") {
        auto q = parse_cusp(p, o);
        normalized = cusp_payload(q);
        if (!o.emit_input) report = run_cusp(q, o);
    } else if (kind == "adjunction") {
        auto q = parse_adjunction(p);
        normalized = adjunction_payload(q);
        if (!o.emit_input) report = run_adjunction(q, o);
    } else if (kind == "maslov") {
        auto z = parse_zeros(p);
        normalized = zeros_payload(z);
        if (!o.emit_input) report = run_maslov_zeros(z);
    } else {
        auto q = parse_reflect(p);
        normalized = reflect_payload(q);
        if (!o.emit_input) report = run_reflect(q, o);
    }
    if (o.emit_input) {
        std::cout << wrap(kind, normalized).dump(2) << "\n";
        return 0;
    }
    ordered_json out;
    out["kind"] = kind;
    out["report"] = report;
    emit(out, o);
    return 0;
}

void report_error(const std::string& category, const std::exception& e, const std::string& pointer = "")
{
    ordered_json err;
    err["error"] = category;
    if (!pointer.empty()) err["pointer"] = pointer;
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Boundary intersection, perturbation and adjunction calculator for half-disk germs"};
    app.require_subcommand(1);
    options o;
    std::string chosen;
    for (const char* kind : kinds) {
        auto* sub = app.add_subcommand(kind, std::string("run a '") + kind + "' problem");
        sub->add_option("file", o.file, "problem file (JSON)");
        sub->add_flag("--pretty", o.pretty, "indent the JSON report");
        sub->add_flag("--json", "compact JSON report (default)");
        sub->add_flag("--emit-input", o.emit_input, "print the normalized problem file and exit");
        sub->add_option("--truncation", o.truncation, "truncation order for input series")->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", o.seed, "seed for randomized structures and move sequences (HALFDISK_SEED overrides)");
        const std::string k = kind;
        if (k == "index") {
            sub->add_option("--method", o.method, "series, linking or both")->check(CLI::IsMember({"series", "linking", "both"}));
            sub->add_option("--radius", o.radius, "linking sphere radius")->check(CLI::PositiveNumber);
            sub->add_option("--samples", o.samples, "samples per trace")->check(CLI::Range(16, 1 << 20));
            sub->add_option("--threads", o.threads, "threads for the linking integral")->check(CLI::Range(1, 256));
        }
        if (k == "perturb" || k == "smooth-cusp") {
            sub->add_option("--grid", o.grid, "cells per unit length (1/h)")->check(CLI::Range(4, 1024));
            sub->add_option("--tol", o.tol, "residual tolerance")->check(CLI::PositiveNumber);
            sub->add_option("--max-iter", o.max_iter, "successive-approximation budget")->check(CLI::Range(1, 10000));
            sub->add_option("--dump", o.dump, "write w on the grid as JSON");
        }
        if (k == "maslov") {
            sub->add_flag("--tangent", o.tangent, "Maslov index of the tangent pair from genus and boundary count");
            sub->add_option("-g,--genus", o.genus, "genus")->check(CLI::NonNegativeNumber);
            sub->add_option("-s,--sigma", o.sigma, "number of boundary circles")->check(CLI::PositiveNumber);
        }
        if (k == "adjunction") sub->add_option("--random-moves", o.random_moves, "apply this many random moves")->check(CLI::NonNegativeNumber);
        sub->callback([&chosen, k] { chosen = k; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    try {
        return dispatch(chosen, o);
    } catch (const schema_error& e) {
        report_error("schema", e, e.pointer().empty() ? "/" : e.pointer());
        return 2;
    } catch (const precondition_error& e) {
        report_error("precondition", e);
        return 2;
    } catch (const std::exception& e) {
        report_error("internal", e);
        return 1;
    }
}
