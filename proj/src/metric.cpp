#include <rbc/metric.hpp>

#include <rbc/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

namespace rbc {

namespace {

std::string idx(int k) { return std::to_string(k + 1); }

/// Radius used for structural sampling checks at construction.
double probe_radius(const std::optional<double>& radius)
{
    return 0.9 * std::min(radius.value_or(0.5), 0.5);
}

} // namespace

MetricSpec::MetricSpec(std::string name, int n, ParamMap params,
                       const std::vector<std::vector<std::string>>& entries_upper,
                       std::optional<double> domain_radius)
    : name_(std::move(name)), n_(n), params_(std::move(params)), radius_(domain_radius)
{
    if (n_ < 1)
        throw InputError("metric dimension must be at least 1");
    if (static_cast<int>(entries_upper.size()) != n_)
        throw InputError("metric '" + name_ + "': expected " + std::to_string(n_) +
                         " rows of upper-triangle entries");
    for (int i = 0; i < n_; ++i) {
        const auto& row = entries_upper[static_cast<std::size_t>(i)];
        const int len = static_cast<int>(row.size());
        int offset = 0;
        if (len == n_)
            offset = i; // full row given; use the part on or above the diagonal
        else if (len != n_ - i)
            throw InputError("metric '" + name_ + "': row " + idx(i) + " must have " +
                             std::to_string(n_ - i) + " (or " + std::to_string(n_) + ") entries");
        for (int j = i; j < n_; ++j) {
            const std::string& text = row[static_cast<std::size_t>(j - i + offset)];
            upper_text_.push_back(text);
            upper_.push_back(parse(text, n_, params_));
        }
    }

    // Diagonal entries must be real-valued functions.
    Rng rng(0x5eed);
    const double r = probe_radius(radius_);
    for (int s = 0; s < 32; ++s) {
        Point p(n_);
        for (int k = 0; k < n_; ++k)
            p(k) = rng.complex_normal() * (r / std::sqrt(2.0 * n_));
        for (int i = 0; i < n_; ++i) {
            cplx v;
            try {
                v = evaluate(entry(i, i), p);
            } catch (const EvaluationError&) {
                continue;
            }
            if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v)))
                throw InputError("metric '" + name_ + "': diagonal entry g_" + idx(i) + idx(i) +
                                 " is not real-valued");
        }
    }

    const HermitianMatrix g0 = metric_value(*this, Point::Zero(n_));
    const double lo = eigh(g0).values(0);
    if (!(lo > 0.0)) {
        std::ostringstream os;
        os << "metric '" << name_ << "' is not positive definite at the origin (min eigenvalue "
           << lo << ")";
        throw InputError(os.str());
    }
}

std::size_t MetricSpec::slot(int i, int j) const
{
    // Row-major packed upper triangle.
    return static_cast<std::size_t>(i * n_ - i * (i - 1) / 2 + (j - i));
}

Expr MetricSpec::entry(int i, int j) const
{
    if (i <= j)
        return upper_[slot(i, j)];
    return conjugate(upper_[slot(j, i)]);
}

const std::string& MetricSpec::entry_text(int i, int j) const
{
    return upper_text_[slot(std::min(i, j), std::max(i, j))];
}

bool MetricSpec::contains(const Point& p) const
{
    return !radius_ || p.norm() <= *radius_ * (1.0 + 1e-12);
}

HermitianMatrix metric_value(const MetricSpec& spec, const Point& p)
{
    const int n = spec.dim();
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            g(i, j) = evaluate(spec.entry(i, j), p);
            g(j, i) = std::conj(g(i, j));
        }
    for (int i = 0; i < n; ++i)
        g(i, i) = g(i, i).real();
    return HermitianMatrix(g);
}

namespace {

MetricJet assemble(const MetricSpec& spec, const Point& p, const std::vector<Jet2>& upper)
{
    const int n = spec.dim();
    MetricJet out;
    out.p = p;
    Matrix g(n, n);
    out.dg_hol.assign(static_cast<std::size_t>(n), Matrix::Zero(n, n));
    out.dg_anti.assign(static_cast<std::size_t>(n), Matrix::Zero(n, n));
    out.ddg.assign(static_cast<std::size_t>(n * n), Matrix::Zero(n, n));
    std::size_t s = 0;
    for (int k = 0; k < n; ++k) {
        for (int l = k; l < n; ++l, ++s) {
            const Jet2& up = upper[s];
            const Jet2 lo = up.conj();
            g(k, l) = up.value;
            g(l, k) = lo.value;
            for (int i = 0; i < n; ++i) {
                out.dg_hol[i](k, l) = up.d1_hol(i);
                out.dg_hol[i](l, k) = lo.d1_hol(i);
                out.dg_anti[i](k, l) = up.d1_anti(i);
                out.dg_anti[i](l, k) = lo.d1_anti(i);
                for (int j = 0; j < n; ++j) {
                    out.ddg[i * n + j](k, l) = up.d2_mixed(i, j);
                    out.ddg[i * n + j](l, k) = lo.d2_mixed(i, j);
                }
            }
        }
    }
    for (int k = 0; k < n; ++k)
        g(k, k) = g(k, k).real();
    out.g = HermitianMatrix(g);
    out.g_inv = invert_pd(out.g);
    return out;
}

void require_domain(const MetricSpec& spec, const Point& p)
{
    if (p.size() != spec.dim())
        throw InputError("point dimension " + std::to_string(p.size()) + " does not match metric '" +
                         spec.name() + "' of dimension " + std::to_string(spec.dim()));
    if (!spec.contains(p)) {
        std::ostringstream os;
        os << "point with |z| = " << p.norm() << " lies outside the validity radius "
           << *spec.domain_radius() << " of metric '" << spec.name() << "'";
        throw InputError(os.str());
    }
}

} // namespace

MetricJet jet(const MetricSpec& spec, const Point& p)
{
    require_domain(spec, p);
    std::vector<Jet2> upper;
    for (int k = 0; k < spec.dim(); ++k)
        for (int l = k; l < spec.dim(); ++l)
            upper.push_back(jet2(spec.entry(k, l), p));
    return assemble(spec, p, upper);
}

MetricJet fd_jet(const MetricSpec& spec, const Point& p, double step)
{
    require_domain(spec, p);
    std::vector<Jet2> upper;
    for (int k = 0; k < spec.dim(); ++k)
        for (int l = k; l < spec.dim(); ++l)
            upper.push_back(fd_jet2(spec.entry(k, l), p, step));
    return assemble(spec, p, upper);
}

double jet_invariant_residual(const MetricJet& j)
{
    const int n = j.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, (j.dg_anti[i] - j.dg_hol[i].adjoint()).cwiseAbs().maxCoeff());
        for (int k = 0; k < n; ++k)
            worst = std::max(worst, (j.mixed(i, k) - j.mixed(k, i).adjoint()).cwiseAbs().maxCoeff());
    }
    const Matrix prod = j.g.matrix() * j.g_inv.matrix() - Matrix::Identity(n, n);
    return std::max(worst, prod.cwiseAbs().maxCoeff());
}

// ---------------------------------------------------------------------------
// Catalog

const std::vector<CatalogEntry>& catalog_entries()
{
    static const std::vector<CatalogEntry> entries = {
        {"flat", "Euclidean metric on C^n", "g_{i jbar} = delta_ij", {{"n", "integer >= 1", 2}},
         std::nullopt},
        {"fubini_study_affine",
         "Fubini-Study metric on an affine chart of P^n, potential log(1+|z|^2)",
         "g_{i jbar} = delta_ij/(1+|z|^2) - zb_i z_j/(1+|z|^2)^2", {{"n", "integer >= 1", 2}},
         std::nullopt},
        {"example_2_2",
         "U(n)-invariant metric with H > 0 whose real bisectional curvature is not nonnegative",
         "g_{i jbar} = (1+|z|^2) delta_ij + (eps-2) zb_i z_j",
         {{"n", "integer >= 2", 2}, {"eps", "0 < eps < 1", 0.3}}, 0.2},
        {"example_2_2_dual", "inverse of example_2_2, curvature of opposite sign: H < 0 but B not <= 0",
         "h_{i jbar} = delta_ij/(1+|z|^2) + (2-eps) zb_i z_j/((1+|z|^2)(1-(1-eps)|z|^2))",
         {{"n", "integer >= 2", 2}, {"eps", "0 < eps < 1", 0.3}}, 0.2},
        {"example_2_3",
         "metric on C^2 with B > 0 near the origin and no nonnegative Ricci tensor",
         "g_{1 1bar} = 1 - |z1|^2 + (1+b)|z2|^2; g_{2 2bar} = 1 - (1+4b)|z1|^2 - |z2|^2; "
         "g_{1 2bar} = (1+b) z2 zb1",
         {{"b", "b > 0", 1.0}}, 0.2},
        {"product_flat_fs", "product of flat C^n1 and the Fubini-Study affine chart of P^n2",
         "g = flat(n1) (+) fubini_study_affine(n2), block diagonal",
         {{"n1", "integer >= 1", 1}, {"n2", "integer >= 1", 1}}, std::nullopt},
    };
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& name)
{
    for (const auto& e : catalog_entries())
        if (e.name == name)
            return e;
    throw InputError("unknown catalog metric '" + name + "'");
}

ParamMap with_example_params(const CatalogEntry& entry, const ParamMap& params)
{
    ParamMap out;
    for (const auto& p : entry.parameters)
        out[p.name] = p.example;
    for (const auto& [k, v] : params)
        out[k] = v;
    return out;
}

namespace {

double require_param(const std::string& metric, const ParamMap& params, const std::string& key)
{
    const auto it = params.find(key);
    if (it == params.end())
        throw InputError("metric '" + metric + "' requires parameter '" + key + "'");
    return it->second;
}

int require_dimension(const std::string& metric, const ParamMap& params, const std::string& key,
                      int min_value)
{
    const double v = require_param(metric, params, key);
    if (v != std::floor(v) || v < min_value || v > 16)
        throw InputError("metric '" + metric + "': parameter " + key + " = " + std::to_string(v) +
                         " must be an integer in [" + std::to_string(min_value) + ", 16]");
    return static_cast<int>(v);
}

double require_eps(const std::string& metric, const ParamMap& params)
{
    const double eps = require_param(metric, params, "eps");
    if (!(eps > 0.0 && eps < 1.0))
        throw InputError("metric '" + metric + "': eps must lie in (0, 1)");
    return eps;
}

std::string normsq_text(int first, int count)
{
    std::string s = "(";
    for (int k = 0; k < count; ++k) {
        if (k)
            s += "+";
        s += "z" + idx(first + k) + "*zb" + idx(first + k);
    }
    return s + ")";
}

std::vector<std::vector<std::string>> fubini_study_rows(int n, int first, int total)
{
    const std::string q = "(1+" + normsq_text(first, n) + ")";
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < n; ++i) {
        std::vector<std::string> row;
        for (int j = i; j < n; ++j) {
            std::string cross = "zb" + idx(first + i) + "*z" + idx(first + j) + "/" + q + "^2";
            row.push_back(i == j ? "1/" + q + " - " + cross : "-" + cross);
        }
        rows.push_back(row);
    }
    (void)total;
    return rows;
}

} // namespace

MetricSpec catalog(const std::string& name, const ParamMap& params)
{
    const CatalogEntry& entry = catalog_entry(name);
    std::vector<std::vector<std::string>> rows;

    if (name == "flat") {
        const int n = require_dimension(name, params, "n", 1);
        for (int i = 0; i < n; ++i)
            rows.emplace_back(static_cast<std::size_t>(n - i), "0"), rows.back()[0] = "1";
        return MetricSpec(name, n, params, rows, entry.validity_radius);
    }
    if (name == "fubini_study_affine") {
        const int n = require_dimension(name, params, "n", 1);
        return MetricSpec(name, n, params, fubini_study_rows(n, 0, n), entry.validity_radius);
    }
    if (name == "example_2_2") {
        const int n = require_dimension(name, params, "n", 2);
        require_eps(name, params);
        for (int i = 0; i < n; ++i) {
            std::vector<std::string> row;
            for (int j = i; j < n; ++j) {
                std::string cross = "(eps-2)*zb" + idx(i) + "*z" + idx(j);
                row.push_back(i == j ? "(1+normsq(z)) + " + cross : cross);
            }
            rows.push_back(row);
        }
        return MetricSpec(name, n, params, rows, entry.validity_radius);
    }
    if (name == "example_2_2_dual") {
        const int n = require_dimension(name, params, "n", 2);
        require_eps(name, params);
        for (int i = 0; i < n; ++i) {
            std::vector<std::string> row;
            for (int j = i; j < n; ++j) {
                std::string cross = "(2-eps)*zb" + idx(i) + "*z" + idx(j) +
                                    "/((1+normsq(z))*(1-(1-eps)*normsq(z)))";
                row.push_back(i == j ? "1/(1+normsq(z)) + " + cross : cross);
            }
            rows.push_back(row);
        }
        return MetricSpec(name, n, params, rows, entry.validity_radius);
    }
    if (name == "example_2_3") {
        const double b = require_param(name, params, "b");
        if (!(b > 0.0))
            throw InputError("metric 'example_2_3': b must be positive");
        rows = {{"1 - z1*zb1 + (1+b)*z2*zb2", "(1+b)*z2*zb1"},
                {"1 - (1+4*b)*z1*zb1 - z2*zb2"}};
        return MetricSpec(name, 2, params, rows, entry.validity_radius);
    }
    if (name == "product_flat_fs") {
        const int n1 = require_dimension(name, params, "n1", 1);
        const int n2 = require_dimension(name, params, "n2", 1);
        const int n = n1 + n2;
        const auto fs = fubini_study_rows(n2, n1, n);
        for (int i = 0; i < n; ++i) {
            std::vector<std::string> row(static_cast<std::size_t>(n - i), "0");
            if (i < n1)
                row[0] = "1";
            else
                for (int j = i; j < n; ++j)
                    row[static_cast<std::size_t>(j - i)] =
                        fs[static_cast<std::size_t>(i - n1)][static_cast<std::size_t>(j - i)];
            rows.push_back(row);
        }
        return MetricSpec(name, n, params, rows, entry.validity_radius);
    }
    throw InputError("unknown catalog metric '" + name + "'");
}

// ---------------------------------------------------------------------------
// Files

MetricSpec metric_from_json(const nlohmann::json& j)
{
    try {
        const std::string name = j.value("name", std::string("custom"));
        const int n = j.at("dimension").get<int>();
        ParamMap params;
        if (j.contains("parameters"))
            for (const auto& [k, v] : j.at("parameters").items())
                params[k] = v.get<double>();
        const auto rows = j.at("entries_upper").get<std::vector<std::vector<std::string>>>();
        std::optional<double> radius;
        if (j.contains("domain_radius") && !j.at("domain_radius").is_null())
            radius = j.at("domain_radius").get<double>();
        return MetricSpec(name, n, params, rows, radius);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed metric definition: ") + e.what());
    }
}

nlohmann::json metric_to_json(const MetricSpec& spec)
{
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < spec.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = i; j < spec.dim(); ++j)
            row.push_back(spec.entry_text(i, j));
        rows.push_back(row);
    }
    nlohmann::json j;
    j["name"] = spec.name();
    j["dimension"] = spec.dim();
    j["parameters"] = spec.params();
    j["entries_upper"] = rows;
    if (spec.domain_radius())
        j["domain_radius"] = *spec.domain_radius();
    return j;
}

MetricSpec load_metric_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open metric file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("metric file '" + path + "' is not valid JSON: " + e.what());
    }
    return metric_from_json(j);
}

// ---------------------------------------------------------------------------
// Regions

std::vector<Point> region_points(int n, const Region& region, std::uint64_t seed)
{
    if (region.count < 1)
        throw InputError("region must contain at least one point");
    if (!(region.radius >= 0.0))
        throw InputError("region radius must be nonnegative");
    std::vector<Point> pts;
    const int d = 2 * n;
    if (!region.grid) {
        Rng rng(seed);
        for (int s = 0; s < region.count; ++s) {
            RealVector x(d);
            for (int a = 0; a < d; ++a)
                x(a) = rng.normal();
            const double norm = x.norm();
            const double rad = region.radius * std::pow(rng.uniform(), 1.0 / d);
            Point p(n);
            for (int k = 0; k < n; ++k)
                p(k) = norm > 0.0 ? cplx(x(k), x(n + k)) * (rad / norm) : cplx(0.0, 0.0);
            pts.push_back(p);
        }
        return pts;
    }
    // Lattice of cell centres in the cube [-r, r]^(2n), kept inside the ball.
    for (int k = 1;; ++k) {
        pts.clear();
        std::vector<int> digit(static_cast<std::size_t>(d), 0);
        for (;;) {
            Point p(n);
            for (int c = 0; c < n; ++c) {
                auto coord = [&](int a) {
                    return region.radius * (-1.0 + (2.0 * digit[static_cast<std::size_t>(a)] + 1.0) / k);
                };
                p(c) = cplx(coord(c), coord(n + c));
            }
            if (p.norm() <= region.radius * (1.0 + 1e-12))
                pts.push_back(p);
            int a = 0;
            while (a < d && ++digit[static_cast<std::size_t>(a)] == k)
                digit[static_cast<std::size_t>(a++)] = 0;
            if (a == d)
                break;
        }
        if (static_cast<int>(pts.size()) >= region.count || k > 64)
            break;
    }
    if (static_cast<int>(pts.size()) > region.count) {
        std::vector<Point> thinned;
        const double stride = static_cast<double>(pts.size()) / region.count;
        for (int s = 0; s < region.count; ++s)
            thinned.push_back(pts[static_cast<std::size_t>(s * stride)]);
        pts = std::move(thinned);
    }
    return pts;
}

ValidationReport validate(const MetricSpec& spec, double radius, int count, std::uint64_t seed)
{
    if (count < 1)
        throw InputError("validation needs at least one sample");
    ValidationReport rep;
    rep.min_eigenvalue = std::numeric_limits<double>::infinity();
    const auto pts = region_points(spec.dim(), Region{radius, count, false}, seed);
    for (const Point& p : pts) {
        ++rep.samples;
        const int n = spec.dim();
        Matrix g(n, n);
        try {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    g(i, j) = evaluate(spec.entry(i, j), p);
        } catch (const EvaluationError& e) {
            if (!rep.first_failure) {
                rep.first_failure = p;
                rep.failure_reason = e.what();
            }
            continue;
        }
        rep.max_asymmetry = std::max(rep.max_asymmetry, hermitian_asymmetry(g));
        for (int i = 0; i < n; ++i)
            rep.max_diagonal_imaginary = std::max(rep.max_diagonal_imaginary, std::abs(g(i, i).imag()));
        const double lo = eigh(HermitianMatrix(g, 1e-8)).values(0);
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, lo);
        if (!(lo > 0.0) && !rep.first_failure) {
            rep.first_failure = p;
            std::ostringstream os;
            os << "not positive definite: min eigenvalue " << lo;
            rep.failure_reason = os.str();
        }
    }
    return rep;
}

} // namespace rbc
