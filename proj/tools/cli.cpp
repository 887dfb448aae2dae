#include <rbc/cli.hpp>

#include <rbc/certify.hpp>
#include <rbc/curvature.hpp>
#include <rbc/errors.hpp>
#include <rbc/report.hpp>
#include <rbc/sampling.hpp>
#include <rbc/schwarz.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace rbc {

// ---------------------------------------------------------------------------
// Literals and references

namespace {

double parse_real(const std::string& s, const std::string& context)
{
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || s.empty())
        throw InputError("invalid number '" + s + "' in " + context);
    return v;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

cplx parse_complex(const std::string& raw)
{
    const std::string s = trim(raw);
    const std::string ctx = "complex literal '" + raw + "'";
    if (s.empty())
        throw InputError("empty complex literal");
    if (s.back() != 'i')
        return {parse_real(s, ctx), 0.0};
    const std::string body = s.substr(0, s.size() - 1);
    // Split at the last sign that is not a leading sign or an exponent sign.
    std::size_t cut = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            cut = k;
            break;
        }
    auto imag_part = [&](const std::string& t) {
        if (t.empty() || t == "+")
            return 1.0;
        if (t == "-")
            return -1.0;
        return parse_real(t, ctx);
    };
    if (cut == std::string::npos)
        return {0.0, imag_part(body)};
    return {parse_real(body.substr(0, cut), ctx), imag_part(body.substr(cut))};
}

Point parse_point(const std::string& text)
{
    const auto parts = split(text, ',');
    Point p(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t k = 0; k < parts.size(); ++k)
        p(static_cast<Eigen::Index>(k)) = parse_complex(parts[k]);
    return p;
}

namespace {

const std::map<std::string, std::string>& aliases()
{
    static const std::map<std::string, std::string> a = {
        {"fs", "fubini_study_affine"},
        {"dual", "example_2_2_dual"},
    };
    return a;
}

bool looks_like_file(const std::string& ref)
{
    return ref.size() > 5 && ref.substr(ref.size() - 5) == ".json";
}

} // namespace

MetricSpec resolve_metric(const std::string& ref, const ParamMap& defaults)
{
    if (looks_like_file(ref))
        return load_metric_file(ref);
    std::string name = ref;
    ParamMap inline_params;
    const auto colon = ref.find(':');
    if (colon != std::string::npos) {
        name = ref.substr(0, colon);
        for (const std::string& kv : split(ref.substr(colon + 1), ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw InputError("metric parameter '" + kv + "' must have the form key=value");
            inline_params[trim(kv.substr(0, eq))] =
                parse_real(trim(kv.substr(eq + 1)), "metric reference '" + ref + "'");
        }
    }
    if (const auto it = aliases().find(name); it != aliases().end())
        name = it->second;
    const CatalogEntry& entry = catalog_entry(name);
    ParamMap params;
    for (const CatalogParameter& p : entry.parameters) {
        params[p.name] = p.example;
        if (const auto d = defaults.find(p.name); d != defaults.end())
            params[p.name] = d->second;
    }
    for (const auto& [k, v] : inline_params) {
        if (!params.count(k))
            throw InputError("metric '" + name + "' has no parameter '" + k + "'");
        params[k] = v;
    }
    return catalog(name, params);
}

MapSpec resolve_map(const std::string& ref, int domain_dim)
{
    if (ref == "identity")
        return MapSpec::identity(domain_dim);
    if (ref.rfind("map:", 0) == 0) {
        const auto comps = split(ref.substr(4), ';');
        return MapSpec("inline", domain_dim, static_cast<int>(comps.size()), comps);
    }
    if (looks_like_file(ref))
        return load_map_file(ref);
    throw InputError("unknown map '" + ref + "' (expected identity, map:expr;... or a .json file)");
}

// ---------------------------------------------------------------------------
// Command implementations

namespace {

enum class FailOn { None, Refuted, Inconclusive };

struct Globals {
    std::uint64_t seed = 0;
    int samples = 100000;
    int starts = 32;
    double tol_algebraic = 1e-12;
    double tol_decomposition = 1e-10;
    double tol_symmetry = 1e-8;
    double tol_fd = 1e-4;
    double tol_opt = 1e-12;
    std::string out;
    std::string fail_on = "none";
    bool timings = false;
};

struct MetricFlags {
    std::optional<double> n, eps, b, n1, n2;
    ParamMap params() const
    {
        ParamMap p;
        if (n)
            p["n"] = *n;
        if (eps)
            p["eps"] = *eps;
        if (b)
            p["b"] = *b;
        if (n1)
            p["n1"] = *n1;
        if (n2)
            p["n2"] = *n2;
        return p;
    }
};

void add_metric_flags(CLI::App* app, MetricFlags& f, bool with_b = true)
{
    app->add_option("--n", f.n, "dimension parameter n");
    app->add_option("--eps", f.eps, "parameter eps");
    if (with_b)
        app->add_option("--b", f.b, "parameter b");
    app->add_option("--n1", f.n1, "parameter n1");
    app->add_option("--n2", f.n2, "parameter n2");
}

/// Statuses collected while running a command, for --fail-on.
struct Outcomes {
    int refuted = 0;
    int inconclusive = 0;
};

Json metric_input(const std::string& ref, const MetricSpec& spec)
{
    Json j;
    j["ref"] = ref;
    j["definition"] = metric_to_json(spec);
    return j;
}

Budget budget_from(const Globals& g)
{
    Budget b;
    b.samples = g.samples;
    b.starts = g.starts;
    b.tol = g.tol_opt;
    b.seed = g.seed;
    return b;
}

Point point_or_origin(const std::string& text, int n)
{
    if (text.empty())
        return Point::Zero(n);
    Point p = parse_point(text);
    if (p.size() != n)
        throw InputError("point has " + std::to_string(p.size()) + " coordinates, expected " +
                         std::to_string(n));
    return p;
}

void count(Outcomes& o, Status s)
{
    if (s == Status::Refuted)
        ++o.refuted;
    else if (s == Status::Inconclusive)
        ++o.inconclusive;
}

// eval -----------------------------------------------------------------------

struct EvalArgs {
    std::string metric;
    std::string point;
    int directions = 16;
    MetricFlags flags;
};

Json cmd_eval(const EvalArgs& a, const Globals& g, Json& inputs)
{
    const MetricSpec spec = resolve_metric(a.metric, a.flags.params());
    const int n = spec.dim();
    const Point p = point_or_origin(a.point, n);
    inputs["metric"] = metric_input(a.metric, spec);
    inputs["point"] = to_json(Vector(p));
    inputs["directions"] = a.directions;
    if (a.directions < 0)
        throw InputError("--directions must be nonnegative");

    const MetricJet j = jet(spec, p);
    const ChernTensor t = chern_tensor(j);
    const UnitaryFrame frame = metric_frame(j);
    const ChernTensor tu = to_frame(t, frame);
    Json r;
    {
        Json m;
        m["operation"] = "jet";
        m["g"] = to_json(j.g.matrix());
        m["min_eigenvalue"] = eigh(j.g).values(0);
        m["jet_invariant_residual"] = jet_invariant_residual(j);
        r["metric"] = m;
    }
    {
        Json c;
        c["operation"] = "chern_tensor";
        c["tolerance_class"] = "algebraic";
        c["frame"] = "coordinate";
        c["R"] = tensor_json(t);
        c["max_abs"] = t.max_abs();
        c["pair_symmetry_residual"] = pair_symmetry_residual(t);
        r["curvature"] = c;
    }
    r["unitary_frame"] = to_json(frame.E);
    r["symmetry"] = to_json(symmetry_report(tu, 0.0));
    r["ricci"] = to_json(ricci(t, j.g));
    {
        const TorsionData td = torsion_eta(j);
        Json tj;
        tj["operation"] = "torsion_eta";
        tj["tolerance_class"] = "algebraic";
        tj["torsion_max_abs"] = td.torsion_norm();
        tj["eta"] = to_json(td.eta);
        tj["eta_norm"] = td.eta.norm();
        tj["torsion_identity_residual"] = torsion_identity_residual(j);
        r["torsion"] = tj;
    }
    {
        std::vector<Vector> dirs;
        for (int i = 0; i < n; ++i)
            dirs.push_back(Vector::Unit(n, i));
        Rng rng(derive_seed(g.seed, 11));
        for (int d = 0; d < a.directions; ++d) {
            Vector v(n);
            for (int i = 0; i < n; ++i)
                v(i) = rng.complex_normal();
            dirs.push_back(v);
        }
        double lo = INFINITY, hi = -INFINITY;
        Json values = Json::array();
        for (const Vector& v : dirs) {
            const double h = hsc(t, j.g, v);
            values.push_back(h);
            lo = std::min(lo, h);
            hi = std::max(hi, h);
        }
        Json hj;
        hj["operation"] = "hsc";
        hj["tolerance_class"] = "symmetry";
        hj["values"] = values;
        hj["min"] = lo;
        hj["max"] = hi;
        hj["spread"] = hi - lo;
        hj["constant_within_tolerance"] = hi - lo <= g.tol_symmetry;
        r["hsc"] = hj;
    }
    {
        Json b;
        b["operation"] = "rbc_value";
        b["frame"] = "unitary frame from the Cholesky factor of g";
        const RealVector uniform = RealVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
        b["uniform_weights"] = rbc_value(tu, uniform);
        Json onehot = Json::array();
        for (int i = 0; i < n; ++i)
            onehot.push_back(rbc_value(tu, RealVector(RealVector::Unit(n, i))));
        b["one_hot_weights"] = onehot;
        b["pair_sum_uniform"] = h_positive_pairsum(tu, uniform);
        r["rbc"] = b;
    }
    return r;
}

// certify --------------------------------------------------------------------

struct CertifyArgs {
    std::string metric;
    std::string point;
    std::optional<double> radius;
    int points = 100;
    bool grid = false;
    std::string cond = "nonneg";
    std::optional<double> constant;
    MetricFlags flags;
};

Json cmd_certify(const CertifyArgs& a, const Globals& g, Json& inputs, Outcomes& o)
{
    const MetricSpec spec = resolve_metric(a.metric, a.flags.params());
    const Condition cond = parse_condition(a.cond);
    inputs["metric"] = metric_input(a.metric, spec);
    inputs["condition"] = to_string(cond);
    const Budget budget = budget_from(g);
    Json r;
    if (a.radius) {
        if (!a.point.empty())
            throw InputError("--point and --radius are mutually exclusive");
        if (a.points < 1)
            throw InputError("--points must be at least 1");
        const Region region{*a.radius, a.points, a.grid};
        inputs["region"] = {{"radius", region.radius}, {"points", region.count}, {"grid", region.grid}};
        const ScanResult s = scan(spec, region, cond, budget);
        for (const ScanPoint& sp : s.points)
            count(o, sp.verdict.status);
        r["scan"] = to_json(s);
        if (a.constant) {
            Json arr = Json::array();
            for (const ScanPoint& sp : s.points)
                arr.push_back(to_json(constant_rbc_check(spec, sp.p, *a.constant, g.tol_symmetry)));
            r["constant_rbc"] = arr;
        }
    } else {
        const Point p = point_or_origin(a.point, spec.dim());
        inputs["point"] = to_json(Vector(p));
        const ChernTensor tu = unitary_chern_tensor(jet(spec, p));
        const Verdict v = certify_sign(tu, cond, budget);
        count(o, v.status);
        r["verdict"] = to_json(v);
        if (a.constant)
            r["constant_rbc"] = to_json(constant_rbc_check(spec, p, *a.constant, g.tol_symmetry));
    }
    return r;
}

// schwarz --------------------------------------------------------------------

struct SchwarzArgs {
    std::string g_ref, h_ref, map_ref;
    std::string point;
    std::optional<double> radius;
    int points = 10;
    double lambda = 0.0, mu = 0.0, kappa = 0.0;
    double step = 1e-3;
    bool sup = false;
    MetricFlags flags;
};

Json cmd_schwarz(const SchwarzArgs& a, const Globals& glob, Json& inputs, Outcomes& o)
{
    const ParamMap defaults = a.flags.params();
    const MetricSpec g = resolve_metric(a.g_ref, defaults);
    const MetricSpec h = resolve_metric(a.h_ref, defaults);
    const MapSpec f = resolve_map(a.map_ref, g.dim());
    if (f.domain_dim() != g.dim() || f.target_dim() != h.dim()) {
        std::ostringstream os;
        os << "dimension mismatch: map " << f.domain_dim() << " -> " << f.target_dim()
           << " between metrics of dimension " << g.dim() << " and " << h.dim();
        throw InputError(os.str());
    }
    inputs["g"] = metric_input(a.g_ref, g);
    inputs["h"] = metric_input(a.h_ref, h);
    inputs["map"] = {{"ref", a.map_ref},
                     {"domain_dim", f.domain_dim()},
                     {"target_dim", f.target_dim()},
                     {"components", f.component_text()}};
    std::vector<Point> pts;
    if (a.radius) {
        if (!a.point.empty())
            throw InputError("--point and --radius are mutually exclusive");
        if (a.points < 1)
            throw InputError("--points must be at least 1");
        pts = region_points(g.dim(), Region{*a.radius, a.points, false}, derive_seed(glob.seed, 21));
        inputs["region"] = {{"radius", *a.radius}, {"points", a.points}};
    } else {
        pts.push_back(point_or_origin(a.point, g.dim()));
        inputs["point"] = to_json(Vector(pts[0]));
    }
    const SchwarzBounds bounds{a.lambda, a.mu, a.kappa};

    Json r;
    Json table = Json::array();
    double worst_bochner = 0.0;
    for (const Point& p : pts) {
        const BochnerTerms terms = bochner_terms(g, h, f, p);
        const BochnerResidual br = bochner_residual(g, h, f, p, a.step, glob.tol_fd);
        const KatoReport k = kato_check(g, h, f, p, a.step);
        Json e;
        e["point"] = to_json(Vector(p));
        e["u"] = terms.u;
        e["nabla_df_norm2"] = terms.nabla_norm2;
        e["ricci_term"] = terms.ricci_term;
        e["curvature_term"] = terms.curvature_term;
        e["box_u"] = br.box_u;
        e["rhs"] = br.rhs;
        e["residual"] = br.residual;
        e["richardson"] = br.richardson;
        if (k.critical) {
            e["kato"] = "critical point (u < 1e-10): log branch skipped";
        } else {
            e["kato"] = {{"gap", k.gap},
                         {"grad_u_norm2", k.grad_u_norm2},
                         {"box_log_u", k.box_log_u},
                         {"lemma_rhs", k.lemma_rhs},
                         {"lemma_residual", k.lemma_residual}};
        }
        worst_bochner = std::max(worst_bochner, br.residual);
        table.push_back(e);
    }
    Json bj;
    bj["operation"] = "bochner_residual";
    bj["tolerance_class"] = "finite_difference";
    bj["step"] = a.step;
    bj["tolerance"] = glob.tol_fd;
    bj["max_residual"] = worst_bochner;
    bj["pass"] = worst_bochner <= glob.tol_fd;
    bj["points"] = table;
    r["bochner"] = bj;
    if (worst_bochner > glob.tol_fd)
        ++o.refuted;

    Budget budget = budget_from(glob);
    const SchwarzReport rep = schwarz_inequality_report(g, h, f, pts, bounds, budget, a.step);
    r["inequalities"] = to_json(rep);
    if (rep.verified_points > 0 &&
        (rep.worst_conclusion < -glob.tol_fd || rep.worst_log_conclusion < -glob.tol_fd))
        ++o.refuted;
    if (a.sup)
        r["sup_bound"] = to_json(sup_bound_check(g, h, f, pts, bounds));
    return r;
}

// mc -------------------------------------------------------------------------

struct MomentArgs {
    int n = 2;
    std::string idx = "1,1,2,2";
};

Json cmd_fs_moment(const MomentArgs& a, const Globals& g, Json& inputs, Outcomes& o)
{
    const auto parts = split(a.idx, ',');
    if (parts.size() != 4)
        throw InputError("--idx needs four comma-separated indices");
    int idx[4];
    for (int k = 0; k < 4; ++k) {
        const double v = parse_real(trim(parts[static_cast<std::size_t>(k)]), "--idx");
        if (v != std::floor(v) || v < 1 || v > a.n)
            throw InputError("moment indices must be integers in 1.." + std::to_string(a.n));
        idx[k] = static_cast<int>(v) - 1;
    }
    inputs["n"] = a.n;
    inputs["idx"] = {idx[0] + 1, idx[1] + 1, idx[2] + 1, idx[3] + 1};
    const MomentEstimate e = fs_moment(a.n, idx[0], idx[1], idx[2], idx[3], g.samples, g.seed);
    const double exact = fs_moment_exact(a.n, idx[0], idx[1], idx[2], idx[3]);
    Json r;
    r["operation"] = "fs_moment";
    r["estimate"] = to_json(e);
    r["closed_form"] = exact;
    r["gate"] = "3 standard errors + 1e-4";
    r["agree"] = within_band(e, exact);
    if (!within_band(e, exact))
        ++o.refuted;
    return r;
}

struct BergerArgs {
    std::string metric = "example_2_2";
    std::string weights = "uniform";
    std::string point;
    MetricFlags flags;
};

Json cmd_berger(const BergerArgs& a, const Globals& g, Json& inputs, Outcomes& o)
{
    const MetricSpec spec = resolve_metric(a.metric, a.flags.params());
    const int n = spec.dim();
    const Point p = point_or_origin(a.point, n);
    RealVector b(n);
    if (a.weights == "uniform") {
        b.setConstant(1.0 / std::sqrt(static_cast<double>(n)));
    } else {
        const auto parts = split(a.weights, ',');
        if (static_cast<int>(parts.size()) != n)
            throw InputError("--b needs " + std::to_string(n) + " weights or 'uniform'");
        for (int i = 0; i < n; ++i)
            b(i) = parse_real(trim(parts[static_cast<std::size_t>(i)]), "--b");
    }
    inputs["metric"] = metric_input(a.metric, spec);
    inputs["point"] = to_json(Vector(p));
    inputs["weights"] = to_json(b);
    const ChernTensor tu = unitary_chern_tensor(jet(spec, p));
    const BergerReport rep = berger_check(tu, b, g.samples, g.seed);
    Json r = to_json(rep);
    const RealVector a2 = b.cwiseProduct(b);
    r["rbc_at_squared_weights"] = rbc_value(tu, a2);
    r["rbc_at_weights"] = rbc_value(tu, b);
    if (!rep.agree)
        ++o.refuted;
    return r;
}

// catalog --------------------------------------------------------------------

Json entry_json(const CatalogEntry& e)
{
    Json j;
    j["name"] = e.name;
    j["description"] = e.description;
    j["formula"] = e.formula;
    Json ps = Json::array();
    for (const CatalogParameter& p : e.parameters)
        ps.push_back({{"name", p.name}, {"range", p.range}, {"example", p.example}});
    j["parameters"] = ps;
    j["validity_radius"] = e.validity_radius ? Json(*e.validity_radius) : Json(nullptr);
    return j;
}

Json cmd_catalog_list()
{
    Json arr = Json::array();
    for (const CatalogEntry& e : catalog_entries())
        arr.push_back(entry_json(e));
    return {{"entries", arr}};
}

Json cmd_catalog_show(const std::string& name)
{
    const CatalogEntry& e = catalog_entry(name);
    Json j = entry_json(e);
    j["example_definition"] = metric_to_json(catalog(name, with_example_params(e, {})));
    return j;
}

// output ---------------------------------------------------------------------

void write_atomic(const std::string& path, const std::string& text)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw InputError("cannot write report to '" + path + "'");
        os << text;
        if (!os)
            throw InputError("failed while writing '" + path + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InputError("cannot move report into place at '" + path + "': " + ec.message());
    }
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Chern curvature, real bisectional curvature certification and Schwarz checks"};
    app.name("rbc");
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--samples", g.samples, "sample budget")->check(CLI::PositiveNumber);
    app.add_option("--starts", g.starts, "optimizer starts")->check(CLI::PositiveNumber);
    app.add_option("--tol-algebraic", g.tol_algebraic)->check(CLI::PositiveNumber);
    app.add_option("--tol-decomposition", g.tol_decomposition)->check(CLI::PositiveNumber);
    app.add_option("--tol-symmetry", g.tol_symmetry)->check(CLI::PositiveNumber);
    app.add_option("--tol-fd", g.tol_fd)->check(CLI::PositiveNumber);
    app.add_option("--tol-opt", g.tol_opt)->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "write the report here instead of standard output");
    app.add_option("--fail-on", g.fail_on, "exit 3 on refuted or inconclusive results")
        ->check(CLI::IsMember({"none", "refuted", "inconclusive"}));
    app.add_flag("--timings", g.timings, "include wall-clock timings (breaks byte determinism)");

    EvalArgs ea;
    CLI::App* eval = app.add_subcommand("eval", "curvature data at a point");
    eval->add_option("metric", ea.metric, "catalog name, name:key=val,... or metric JSON")->required();
    eval->add_option("--point", ea.point, "comma-separated complex coordinates");
    eval->add_option("--directions", ea.directions, "random HSC directions");
    add_metric_flags(eval, ea.flags);

    CertifyArgs ca;
    CLI::App* cert = app.add_subcommand("certify", "sign certification of real bisectional curvature");
    cert->add_option("metric", ca.metric)->required();
    cert->add_option("--point", ca.point);
    cert->add_option("--radius", ca.radius, "scan a ball of this radius");
    cert->add_option("--points", ca.points, "points in the scan");
    cert->add_flag("--grid", ca.grid, "lattice instead of random points");
    cert->add_option("--cond", ca.cond, "pos, nonneg, neg, nonpos, gt:c, ge:c, lt:c, le:c");
    cert->add_option("--constant", ca.constant, "also check the constant-RBC identities for this c");
    add_metric_flags(cert, ca.flags);

    SchwarzArgs sa;
    CLI::App* sch = app.add_subcommand("schwarz", "Schwarz calculation checks for a holomorphic map");
    sch->add_option("domain", sa.g_ref, "domain metric")->required();
    sch->add_option("target", sa.h_ref, "target metric")->required();
    sch->add_option("map", sa.map_ref, "identity, map:expr;... or map JSON")->required();
    sch->add_option("--point", sa.point);
    sch->add_option("--radius", sa.radius);
    sch->add_option("--points", sa.points);
    sch->add_option("--lambda", sa.lambda);
    sch->add_option("--mu", sa.mu)->check(CLI::NonNegativeNumber);
    sch->add_option("--kappa", sa.kappa)->check(CLI::NonNegativeNumber);
    sch->add_option("--step", sa.step, "finite-difference step");
    sch->add_flag("--sup", sa.sup, "include the supremum-bound block");
    add_metric_flags(sch, sa.flags);

    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo checks");
    mc->require_subcommand(1);
    MomentArgs ma;
    CLI::App* mom = mc->add_subcommand("fs-moment", "sphere moment of w_i wb_j w_k wb_l");
    mom->add_option("--n", ma.n)->check(CLI::Range(1, 64));
    mom->add_option("--idx", ma.idx, "four 1-based indices");
    BergerArgs ba;
    CLI::App* ber = mc->add_subcommand("berger", "Berger averaging vs closed form");
    ber->add_option("--metric", ba.metric);
    ber->add_option("--b", ba.weights, "weights: uniform or comma-separated");
    ber->add_option("--point", ba.point);
    add_metric_flags(ber, ba.flags, false);

    CLI::App* cat = app.add_subcommand("catalog", "list or show catalog metrics");
    cat->require_subcommand(1);
    cat->add_subcommand("list", "all entries");
    std::string show_name;
    CLI::App* show = cat->add_subcommand("show", "one entry");
    show->add_option("name", show_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    Outcomes outcomes;
    Json report;
    report["tool"] = "rbc";
    report["tool_version"] = kToolVersion;
    report["convention_block"] = convention_block();
    Json inputs;
    Json results;
    std::string command;
    try {
        if (*eval) {
            command = "eval";
            results = cmd_eval(ea, g, inputs);
        } else if (*cert) {
            command = "certify";
            results = cmd_certify(ca, g, inputs, outcomes);
        } else if (*sch) {
            command = "schwarz";
            results = cmd_schwarz(sa, g, inputs, outcomes);
        } else if (*mom) {
            command = "mc fs-moment";
            results = cmd_fs_moment(ma, g, inputs, outcomes);
        } else if (*ber) {
            command = "mc berger";
            results = cmd_berger(ba, g, inputs, outcomes);
        } else if (*show) {
            command = "catalog show";
            inputs["name"] = show_name;
            results = cmd_catalog_show(show_name);
        } else {
            command = "catalog list";
            results = cmd_catalog_list();
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const EvaluationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    report["command"] = command;
    inputs["budget"] = {{"samples", g.samples}, {"starts", g.starts}, {"tol_opt", g.tol_opt}};
    inputs["tolerances"] = {{"algebraic", g.tol_algebraic},
                            {"decomposition", g.tol_decomposition},
                            {"symmetry", g.tol_symmetry},
                            {"finite_difference", g.tol_fd}};
    report["inputs"] = inputs;
    report["results"] = results;
    report["seed"] = g.seed;
    if (g.timings) {
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        report["timings"] = {{"total_ms", ms}};
    }
    const std::string text = report.dump(2) + "\n";
    try {
        if (g.out.empty())
            out << text;
        else
            write_atomic(g.out, text);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const bool fail = (g.fail_on == "refuted" && outcomes.refuted > 0) ||
                      (g.fail_on == "inconclusive" && outcomes.refuted + outcomes.inconclusive > 0);
    return fail ? 3 : 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv;
    argv.push_back("rbc");
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace rbc
