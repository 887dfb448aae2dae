#include <rbc/schwarz.hpp>

#include <rbc/errors.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace rbc {

MapSpec::MapSpec(std::string name, int m, int n, const std::vector<std::string>& components,
                 const ParamMap& params)
    : name_(std::move(name)), m_(m), n_(n), text_(components)
{
    if (m < 1 || n < 1)
        throw InputError("map dimensions must be at least 1");
    if (static_cast<int>(components.size()) != n)
        throw InputError("map '" + name_ + "' needs " + std::to_string(n) + " components, got " +
                         std::to_string(components.size()));
    for (int a = 0; a < n; ++a) {
        Expr e = parse(components[static_cast<std::size_t>(a)], m, params);
        if (e.has_conjugated_variables())
            throw InputError("map component " + std::to_string(a + 1) +
                             " uses a conjugated variable; maps must be holomorphic");
        comps_.push_back(e);
    }
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < m; ++i)
            d1_.push_back(differentiate(comps_[static_cast<std::size_t>(a)], i));
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                d2_.push_back(differentiate(first(a, i), j));
}

MapSpec MapSpec::identity(int n)
{
    std::vector<std::string> comps;
    for (int a = 0; a < n; ++a)
        comps.push_back("z" + std::to_string(a + 1));
    return MapSpec("identity", n, n, comps);
}

const Expr& MapSpec::first(int a, int i) const
{
    return d1_[static_cast<std::size_t>(a * m_ + i)];
}

const Expr& MapSpec::second(int a, int i, int j) const
{
    return d2_[static_cast<std::size_t>((a * m_ + i) * m_ + j)];
}

Point MapSpec::apply(const Point& p) const
{
    if (p.size() != m_)
        throw InputError("point dimension does not match the map domain");
    Point out(n_);
    for (int a = 0; a < n_; ++a)
        out(a) = evaluate(component(a), p);
    return out;
}

MapSpec map_from_json(const nlohmann::json& j)
{
    try {
        ParamMap params;
        if (j.contains("parameters"))
            for (const auto& [k, v] : j.at("parameters").items())
                params[k] = v.get<double>();
        return MapSpec(j.value("name", std::string("map")), j.at("domain_dim").get<int>(),
                       j.at("target_dim").get<int>(),
                       j.at("components").get<std::vector<std::string>>(), params);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed map definition: ") + e.what());
    }
}

MapSpec load_map_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open map file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("map file '" + path + "' is not valid JSON: " + e.what());
    }
    return map_from_json(j);
}

namespace {

Matrix first_derivatives(const MapSpec& f, const Point& p)
{
    Matrix df(f.target_dim(), f.domain_dim());
    for (int a = 0; a < f.target_dim(); ++a)
        for (int i = 0; i < f.domain_dim(); ++i)
            df(a, i) = evaluate(f.first(a, i), p);
    return df;
}

} // namespace

MapJet map_jet(const MapSpec& f, const Point& p)
{
    MapJet mj;
    mj.p = p;
    mj.fp = f.apply(p);
    mj.df = first_derivatives(f, p);
    const int m = f.domain_dim();
    for (int a = 0; a < f.target_dim(); ++a) {
        Matrix d2(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                d2(i, j) = evaluate(f.second(a, i, j), p);
        mj.d2f.push_back(d2);
    }
    return mj;
}

Matrix pullback(const HermitianMatrix& h, const Matrix& df)
{
    return df.transpose() * h.matrix() * df.conjugate();
}

double trace_u(const HermitianMatrix& g, const HermitianMatrix& h, const Matrix& df)
{
    const Matrix ginv = invert_pd(g).matrix();
    return (ginv * pullback(h, df)).trace().real();
}

double trace_u(const MetricJet& gj, const MetricJet& hj, const MapJet& mj)
{
    return (gj.g_inv.matrix() * pullback(hj.g, mj.df)).trace().real();
}

NablaDf nabla_df(const MetricJet& gj, const MetricJet& hj, const MapJet& mj)
{
    const int m = gj.dim();
    const int n = hj.dim();
    if (mj.df.rows() != n || mj.df.cols() != m)
        throw InputError("map jet dimensions do not match the metrics");
    const TorsionData cg = connection(gj);
    const TorsionData ch = connection(hj);
    NablaDf out;
    for (int a = 0; a < n; ++a) {
        Matrix x = mj.d2f[static_cast<std::size_t>(a)];
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                cplx acc = x(i, j);
                for (int k = 0; k < m; ++k)
                    acc -= cg.Gamma(k, j, i) * mj.df(a, k);
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                        acc += ch.Gamma(a, b, c) * mj.df(b, j) * mj.df(c, i);
                x(i, j) = acc;
            }
        out.components.push_back(x);
    }
    const Matrix& ginv = gj.g_inv.matrix();
    const Matrix& h = hj.g.matrix();
    cplx norm(0.0, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (h(a, b) == cplx(0.0, 0.0))
                continue;
            // sum g^{i i'bar} g^{j j'bar} X^a_{ij} conj(X^b_{i'j'})
            const Matrix& xa = out.components[static_cast<std::size_t>(a)];
            const Matrix& xb = out.components[static_cast<std::size_t>(b)];
            const Matrix inner = ginv * xa * ginv.transpose();
            norm += h(a, b) * (inner.cwiseProduct(xb.conjugate())).sum();
        }
    out.norm2 = norm.real();
    return out;
}

double box_fd(const ChartFunction& fn, const HermitianMatrix& g_inv, const Point& p, double step,
              bool richardson)
{
    auto once = [&](double h) {
        const Matrix hess = fd_mixed_hessian(fn, p, h);
        return (g_inv.matrix() * hess).trace().real();
    };
    if (!richardson)
        return once(step);
    return (4.0 * once(step / 2.0) - once(step)) / 3.0;
}

ChartFunction u_function(const MetricSpec& g, const MetricSpec& h, const MapSpec& f)
{
    return [&g, &h, &f](const Point& z) {
        const Matrix df = first_derivatives(f, z);
        return cplx(trace_u(metric_value(g, z), metric_value(h, f.apply(z)), df), 0.0);
    };
}

namespace {

void check_dimensions(const MetricSpec& g, const MetricSpec& h, const MapSpec& f)
{
    if (g.dim() != f.domain_dim() || h.dim() != f.target_dim()) {
        std::ostringstream os;
        os << "dimension mismatch: map " << f.domain_dim() << " -> " << f.target_dim()
           << " between metrics of dimension " << g.dim() << " and " << h.dim();
        throw InputError(os.str());
    }
}

void check_step(double step)
{
    if (!(step > 0.0 && step <= 1e-2))
        throw InputError("finite-difference step must lie in (0, 1e-2]");
}

} // namespace

double box_u_fd(const MetricSpec& g, const MetricSpec& h, const MapSpec& f, const Point& p,
                double step, bool richardson)
{
    check_dimensions(g, h, f);
    check_step(step);
    const HermitianMatrix ginv = invert_pd(metric_value(g, p));
    return box_fd(u_function(g, h, f), ginv, p, step, richardson);
}

BochnerTerms bochner_terms(const MetricSpec& g, const MetricSpec& h, const MapSpec& f,
                           const Point& p)
{
    check_dimensions(g, h, f);
    const MapJet mj = map_jet(f, p);
    const MetricJet gj = jet(g, p);
    const MetricJet hj = jet(h, mj.fp);
    BochnerTerms t;
    t.u = trace_u(gj, hj, mj);
    t.nabla_norm2 = nabla_df(gj, hj, mj).norm2;
    const Matrix& ginv = gj.g_inv.matrix();
    const Matrix ric2 = ricci(chern_tensor(gj), gj.g).ric2;
    const Matrix phi = pullback(hj.g, mj.df);
    t.ricci_term = (ric2 * ginv * phi * ginv).trace().real();
    const Matrix psi = mj.df * ginv.transpose() * mj.df.adjoint();
    t.curvature_term = quad_form_raw(chern_tensor(hj), psi);
    return t;
}

BochnerResidual bochner_residual(const MetricSpec& g, const MetricSpec& h, const MapSpec& f,
                                 const Point& p, double step, double tol)
{
    const BochnerTerms terms = bochner_terms(g, h, f, p);
    BochnerResidual r;
    r.rhs = terms.rhs();
    r.box_u = box_u_fd(g, h, f, p, step, false);
    r.residual = std::abs(r.box_u - r.rhs);
    if (r.residual > tol) {
        r.box_u = box_u_fd(g, h, f, p, step, true);
        r.residual = std::abs(r.box_u - r.rhs);
        r.richardson = true;
    }
    return r;
}

KatoReport kato_check(const MetricSpec& g, const MetricSpec& h, const MapSpec& f, const Point& p,
                      double step)
{
    check_step(step);
    const BochnerTerms terms = bochner_terms(g, h, f, p);
    KatoReport k;
    k.u = terms.u;
    k.nabla_norm2 = terms.nabla_norm2;
    if (k.u < 1e-10) {
        k.critical = true;
        return k;
    }
    const ChartFunction u = u_function(g, h, f);
    const HermitianMatrix ginv = invert_pd(metric_value(g, p));
    const auto [du, dbar_u] = fd_gradient(u, p, 1e-5);
    (void)dbar_u;
    k.grad_u_norm2 = (du.transpose() * ginv.matrix().transpose() * du.conjugate())(0, 0).real();
    k.gap = k.nabla_norm2 - k.grad_u_norm2 / k.u;
    const ChartFunction log_u = [u](const Point& z) { return cplx(std::log(u(z).real()), 0.0); };
    k.box_log_u = box_fd(log_u, ginv, p, step, true);
    k.lemma_rhs = (terms.ricci_term - terms.curvature_term) / k.u;
    k.lemma_residual = k.box_log_u - k.lemma_rhs;
    return k;
}

// ---------------------------------------------------------------------------
// Inequality checks

namespace {

struct CanonicalForm {
    RealVector singular;
    Matrix target_frame; // h-unitary frame in which df is diagonal
};

CanonicalForm canonical_form(const MetricJet& gj, const MetricJet& hj, const MapJet& mj)
{
    const Matrix eg = metric_frame(gj).E;
    const Matrix eh = metric_frame(hj).E;
    const Matrix ft = eh.partialPivLu().solve(mj.df * eg);
    const Eigen::JacobiSVD<Matrix> svd(ft, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {svd.singularValues(), eh * svd.matrixU()};
}

} // namespace

int numerical_rank(const MetricJet& gj, const MetricJet& hj, const MapJet& mj)
{
    const RealVector s = canonical_form(gj, hj, mj).singular;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-8)
            ++r;
    return r;
}

double cauchy_schwarz_gap(const Matrix& phi)
{
    const double m = static_cast<double>(phi.rows());
    const double tr = phi.trace().real();
    return phi.squaredNorm() - tr * tr / m;
}

SchwarzReport schwarz_inequality_report(const MetricSpec& g, const MetricSpec& h, const MapSpec& f,
                                        const std::vector<Point>& points,
                                        const SchwarzBounds& bounds, const Budget& budget,
                                        double step)
{
    check_dimensions(g, h, f);
    check_step(step);
    if (points.empty())
        throw InputError("the Schwarz report needs at least one point");
    if (bounds.mu < 0.0 || bounds.kappa < 0.0)
        throw InputError("mu and kappa must be nonnegative");
    const int m = g.dim();
    SchwarzReport rep;
    rep.bounds = bounds;

    struct Local {
        MetricJet gj, hj;
        MapJet mj;
    };
    std::vector<Local> jets;
    for (const Point& p : points) {
        const MapJet mj = map_jet(f, p);
        jets.push_back({jet(g, p), jet(h, mj.fp), mj});
        rep.rank = std::max(rep.rank, numerical_rank(jets.back().gj, jets.back().hj, mj));
    }
    const bool constant_map = rep.rank == 0;
    if (constant_map)
        rep.notices.push_back("df vanishes at every point (constant map): log branch skipped");
    const double kr = constant_map ? 0.0 : bounds.kappa / rep.rank;
    const double coef = kr + bounds.mu / m;
    const ChartFunction u_fn = u_function(g, h, f);
    const ChartFunction log_u = [u_fn](const Point& z) { return cplx(std::log(u_fn(z).real()), 0.0); };

    rep.worst_conclusion = std::numeric_limits<double>::infinity();
    rep.worst_log_conclusion = std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        const Local& L = jets[idx];
        SchwarzPoint sp;
        sp.p = points[idx];
        sp.u = trace_u(L.gj, L.hj, L.mj);
        const Matrix phi = pullback(L.hj.g, L.mj.df);
        const Matrix ric2 = ricci(chern_tensor(L.gj), L.gj.g).ric2;
        const Matrix hyp = ric2 + bounds.lambda * L.gj.g.matrix() - bounds.mu * phi;
        sp.hyp_ricci_min_eigenvalue = eigh(HermitianMatrix(hyp, 1e-8)).values(0);
        sp.hyp_ricci = sp.hyp_ricci_min_eigenvalue >= -1e-10;

        const ChernTensor rh = chern_tensor(L.hj);
        Budget b = budget;
        b.seed = derive_seed(budget.seed, idx);
        const Verdict v = certify_sign(to_frame(rh, metric_frame(L.hj)),
                                       Condition{Relation::LessEq, -bounds.kappa}, b);
        sp.hyp_curvature_status = v.status;
        sp.hyp_curvature = v.status == Status::Certified;

        const Matrix eg = metric_frame(L.gj).E;
        sp.cauchy_schwarz_gap = cauchy_schwarz_gap(eg.transpose() * phi * eg.conjugate());

        const CanonicalForm cf = canonical_form(L.gj, L.hj, L.mj);
        const ChernTensor rc = to_frame(rh, UnitaryFrame{cf.target_frame, L.mj.fp});
        const int n = h.dim();
        RealVector lam2 = RealVector::Zero(n);
        for (Eigen::Index i = 0; i < cf.singular.size(); ++i)
            lam2(i) = cf.singular(i) * cf.singular(i);
        double lhs = 0.0;
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
                lhs += rc(a, a, c, c).real() * lam2(a) * lam2(c);
        sp.rank_lhs = lhs;
        sp.rank_rhs = -kr * lam2.sum() * lam2.sum();
        const Matrix psi = L.mj.df * L.gj.g_inv.matrix().transpose() * L.mj.df.adjoint();
        sp.rank_vs_direct = std::abs(lhs - quad_form_raw(rh, psi));

        const HermitianMatrix ginv = L.gj.g_inv;
        sp.box_u = box_fd(u_fn, ginv, sp.p, step, true);
        sp.conclusion_residual = sp.box_u + bounds.lambda * sp.u - coef * sp.u * sp.u;
        if (!constant_map && sp.u >= 1e-10) {
            const double box_log = box_fd(log_u, ginv, sp.p, step, true);
            sp.log_conclusion_residual = box_log + bounds.lambda - coef * sp.u;
        }
        sp.hypotheses_verified = sp.hyp_ricci && sp.hyp_curvature;
        if (sp.hypotheses_verified) {
            ++rep.verified_points;
            rep.worst_conclusion = std::min(rep.worst_conclusion, sp.conclusion_residual);
            if (sp.log_conclusion_residual)
                rep.worst_log_conclusion =
                    std::min(rep.worst_log_conclusion, *sp.log_conclusion_residual);
        }
        rep.points.push_back(std::move(sp));
    }
    if (rep.verified_points == 0) {
        rep.notices.push_back("hypotheses not verified at any point: no conclusion is asserted");
        rep.worst_conclusion = 0.0;
    }
    if (!std::isfinite(rep.worst_log_conclusion))
        rep.worst_log_conclusion = 0.0;
    return rep;
}

SupBoundReport sup_bound_check(const MetricSpec& g, const MetricSpec& h, const MapSpec& f,
                               const std::vector<Point>& points, const SchwarzBounds& bounds)
{
    check_dimensions(g, h, f);
    if (points.empty())
        throw InputError("the supremum check needs at least one point");
    SupBoundReport r;
    int rank = 0;
    for (const Point& p : points) {
        const MapJet mj = map_jet(f, p);
        const MetricJet gj = jet(g, p);
        const MetricJet hj = jet(h, mj.fp);
        r.max_u = std::max(r.max_u, trace_u(gj, hj, mj));
        rank = std::max(rank, numerical_rank(gj, hj, mj));
    }
    if (bounds.kappa + bounds.mu > 0.0)
        r.corollary_bound = g.dim() * bounds.lambda / (bounds.kappa + bounds.mu);
    if (bounds.kappa > 0.0)
        r.rank_bound = rank * bounds.lambda / bounds.kappa;
    if (!r.corollary_bound && !r.rank_bound) {
        r.classification = "no bound applicable";
        return r;
    }
    bool ok = true;
    for (const auto& b : {r.corollary_bound, r.rank_bound})
        if (b && r.max_u > *b + 1e-9 * std::max(1.0, std::abs(*b)))
            ok = false;
    r.classification = ok ? "consistent"
                          : "violated (hypotheses likely unmet or region not representative)";
    return r;
}

} // namespace rbc
