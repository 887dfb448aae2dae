#include <rbc/certify.hpp>

#include <rbc/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rbc {

Condition parse_condition(const std::string& text)
{
    if (text == "pos")
        return {Relation::Greater, 0.0};
    if (text == "nonneg")
        return {Relation::GreaterEq, 0.0};
    if (text == "neg")
        return {Relation::Less, 0.0};
    if (text == "nonpos")
        return {Relation::LessEq, 0.0};
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string op = text.substr(0, colon);
        const std::string num = text.substr(colon + 1);
        double c = 0.0;
        try {
            std::size_t used = 0;
            c = std::stod(num, &used);
            if (used != num.size())
                throw std::invalid_argument(num);
        } catch (const std::exception&) {
            throw InputError("invalid threshold in condition '" + text + "'");
        }
        if (!std::isfinite(c))
            throw InputError("invalid threshold in condition '" + text + "'");
        if (op == "gt")
            return {Relation::Greater, c};
        if (op == "ge")
            return {Relation::GreaterEq, c};
        if (op == "lt")
            return {Relation::Less, c};
        if (op == "le")
            return {Relation::LessEq, c};
    }
    throw InputError("invalid condition '" + text +
                     "' (expected pos, nonneg, neg, nonpos, gt:c, ge:c, lt:c or le:c)");
}

std::string to_string(const Condition& cond)
{
    static const char* ops[] = {"B > ", "B >= ", "B < ", "B <= "};
    std::ostringstream os;
    os << ops[static_cast<int>(cond.relation)] << cond.c;
    return os.str();
}

std::string to_string(Status s)
{
    switch (s) {
    case Status::Certified:
        return "certified";
    case Status::Refuted:
        return "refuted";
    default:
        return "inconclusive";
    }
}

// ---------------------------------------------------------------------------
// Hermitian coordinates

std::vector<Matrix> hermitian_basis(int n)
{
    std::vector<Matrix> basis;
    const double r = M_SQRT1_2;
    for (int i = 0; i < n; ++i) {
        Matrix m = Matrix::Zero(n, n);
        m(i, i) = 1.0;
        basis.push_back(m);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Matrix re = Matrix::Zero(n, n);
            re(i, j) = re(j, i) = r;
            basis.push_back(re);
            Matrix im = Matrix::Zero(n, n);
            im(i, j) = cplx(0.0, r);
            im(j, i) = cplx(0.0, -r);
            basis.push_back(im);
        }
    return basis;
}

RealVector hermitian_coordinates(const Matrix& xi)
{
    const int n = static_cast<int>(xi.rows());
    RealVector x(n * n);
    int a = 0;
    for (int i = 0; i < n; ++i)
        x(a++) = xi(i, i).real();
    const double s = std::sqrt(2.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            // tr(xi B) for the two off-diagonal basis elements
            x(a++) = s * xi(i, j).real();
            x(a++) = s * xi(i, j).imag();
        }
    return x;
}

Matrix from_hermitian_coordinates(const RealVector& x, int n)
{
    Matrix m = Matrix::Zero(n, n);
    int a = 0;
    for (int i = 0; i < n; ++i)
        m(i, i) = x(a++);
    const double r = M_SQRT1_2;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double re = x(a++);
            const double im = x(a++);
            m(i, j) = cplx(re * r, im * r);
            m(j, i) = std::conj(m(i, j));
        }
    return m;
}

RealMatrix quad_operator(const ChernTensor& t)
{
    const int n = t.n;
    const int d = n * n;
    Matrix M(d, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    M(i * n + j, k * n + l) = t(i, j, k, l);
    const std::vector<Matrix> basis = hermitian_basis(n);
    Matrix B(d, d);
    for (int a = 0; a < d; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                B(i * n + j, a) = basis[static_cast<std::size_t>(a)](i, j);
    const Matrix q = B.transpose() * M * B;
    RealMatrix out = 0.5 * (q + q.transpose()).real();
    return out;
}

SpectralBounds spectral_bounds(const ChernTensor& t)
{
    const RealMatrix q = quad_operator(t);
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(q, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigendecomposition of the quadratic operator failed");
    const double slack =
        16.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(q.rows()) * q.norm();
    const RealVector& ev = solver.eigenvalues();
    return {ev(0) - slack, ev(ev.size() - 1) + slack};
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

double form_value(const RealMatrix& q, const Matrix& xi)
{
    const RealVector x = hermitian_coordinates(xi);
    return x.dot(q * x);
}

Matrix random_gaussian(int rows, int cols, Rng& rng)
{
    Matrix v(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            v(i, j) = rng.complex_normal();
    return v;
}

Matrix normalized_gram(const Matrix& v)
{
    const Matrix p = v * v.adjoint();
    return p / p.norm();
}

} // namespace

SampleExtrema sample_extrema(const ChernTensor& t, int count, std::uint64_t seed)
{
    if (count < 1)
        throw InputError("sample count must be at least 1");
    const int n = t.n;
    const RealMatrix q = quad_operator(t);
    Rng rng(seed);
    SampleExtrema out;
    out.min.value = std::numeric_limits<double>::infinity();
    out.max.value = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < count; ++s) {
        Matrix xi;
        if (s % 2 == 0) {
            const Matrix u = random_unitary(n, rng);
            RealVector a(n);
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                a(i) = -std::log(1.0 - rng.uniform());
                total += a(i);
            }
            Matrix d = Matrix::Zero(n, n);
            for (int i = 0; i < n; ++i)
                d(i, i) = std::sqrt(a(i) / total);
            xi = u * d * u.adjoint();
        } else {
            xi = normalized_gram(random_gaussian(n, n, rng));
        }
        const double v = form_value(q, xi);
        if (v < out.min.value)
            out.min = {v, xi};
        if (v > out.max.value)
            out.max = {v, xi};
    }
    out.count = count;
    return out;
}

// ---------------------------------------------------------------------------
// Optimization

namespace {

struct Objective {
    const RealMatrix& q;
    double sign;
    int n;

    // Value of sign * Q(P)/|P|^2 for P = V V^dagger, and its gradient in V.
    double value(const Matrix& v) const
    {
        const RealVector p = hermitian_coordinates(v * v.adjoint());
        return sign * p.dot(q * p) / p.squaredNorm();
    }
    double value_and_gradient(const Matrix& v, Matrix& grad) const
    {
        const Matrix P = v * v.adjoint();
        const RealVector p = hermitian_coordinates(P);
        const double s = p.squaredNorm();
        const RealVector qp = q * p;
        const double f = p.dot(qp) / s;
        const RealVector gp = sign * 2.0 * (qp - f * p) / s;
        grad = 2.0 * from_hermitian_coordinates(gp, n) * v;
        return sign * f;
    }
};

Matrix normalize_factor(const Matrix& v)
{
    // Scale so that |V V^dagger|_F = 1.
    const double fro = (v * v.adjoint()).norm();
    return v / std::sqrt(fro);
}

} // namespace

OptimizeResult optimize_extremum(const ChernTensor& t, Direction direction, int starts, double tol,
                                 std::uint64_t seed, int max_iterations)
{
    if (starts < 1)
        throw InputError("optimizer needs at least one start");
    if (!(tol > 0.0))
        throw InputError("optimizer tolerance must be positive");
    const int n = t.n;
    const RealMatrix q = quad_operator(t);
    const Objective obj{q, direction == Direction::Min ? 1.0 : -1.0, n};
    Rng rng(seed);
    OptimizeResult best;
    best.value = std::numeric_limits<double>::infinity();
    best.iterations = 0;
    for (int s = 0; s < starts; ++s) {
        Matrix v;
        if (s == 0)
            v = Matrix::Identity(n, n);
        else if (s % 2 == 1) {
            v = Matrix::Zero(n, n);
            v.col(0) = random_gaussian(n, 1, rng);
        } else
            v = random_gaussian(n, n, rng);
        v = normalize_factor(v);

        Matrix grad;
        double f = obj.value_and_gradient(v, grad);
        double step = 1.0;
        bool stopped = false;
        int it = 0;
        for (; it < max_iterations; ++it) {
            const double g2 = grad.squaredNorm();
            if (g2 == 0.0) {
                stopped = true;
                break;
            }
            double trial_f = f;
            Matrix trial;
            bool accepted = false;
            for (int bt = 0; bt < 60; ++bt) {
                trial = normalize_factor(v - step * grad);
                trial_f = obj.value(trial);
                if (trial_f <= f - 1e-4 * step * g2) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                stopped = true; // no descent direction left at machine precision
                break;
            }
            double improvement = f - trial_f;
            v = trial;
            f = obj.value_and_gradient(v, grad);
            step = std::min(step * 2.0, 1e3);
            if (it % 20 == 19) {
                // Descent approaches the boundary of the cone only sublinearly;
                // try dropping small singular directions of V outright.
                const Eigen::JacobiSVD<Matrix> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
                for (int r = n - 1; r >= 1; --r) {
                    if (svd.singularValues()(r) == 0.0)
                        continue;
                    const Matrix cut = normalize_factor(
                        svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal() *
                        svd.matrixV().leftCols(r).adjoint());
                    const double cf = obj.value(cut);
                    if (cf < f) {
                        improvement += f - cf;
                        v = cut;
                        f = obj.value_and_gradient(v, grad);
                    }
                }
            }
            if (improvement < tol) {
                stopped = true;
                ++it;
                break;
            }
        }
        best.iterations += it;
        if (!stopped)
            best.converged = false;
        if (f < best.value) {
            best.value = f;
            best.xi = normalized_gram(v);
        }
    }
    // Report the value of Q itself, re-evaluated at the returned direction.
    best.value = form_value(q, best.xi);
    return best;
}

// ---------------------------------------------------------------------------
// Verdicts

double violation(const Condition& cond, double v)
{
    switch (cond.relation) {
    case Relation::Greater:
    case Relation::GreaterEq:
        return cond.c - v;
    default:
        return v - cond.c;
    }
}

Verdict certify_sign(const ChernTensor& t, const Condition& cond, const Budget& budget)
{
    if (t.frame != FrameKind::Unitary)
        throw InputError("certification requires a tensor expressed in a unitary frame");
    if (budget.samples < 1 || budget.starts < 1 || !(budget.tol > 0.0) || budget.max_iterations < 1)
        throw InputError("certification budget must be positive");
    const int n = t.n;
    Verdict v;
    v.condition = cond;
    v.samples = budget.samples;
    v.starts = budget.starts;
    v.seed = budget.seed;

    const SpectralBounds sb = spectral_bounds(t);
    v.spectral_lower = sb.lower;
    v.spectral_upper = sb.upper;

    const RealMatrix q = quad_operator(t);
    const SampleExtrema se = sample_extrema(t, budget.samples, derive_seed(budget.seed, 0));
    Extremum lo = se.min;
    Extremum hi = se.max;
    auto consider = [&](const Matrix& xi) {
        const double val = form_value(q, xi);
        if (val < lo.value)
            lo = {val, xi};
        if (val > hi.value)
            hi = {val, xi};
    };
    // Uniform and one-hot weights in the base frame.
    consider(Matrix::Identity(n, n) / std::sqrt(static_cast<double>(n)));
    for (int i = 0; i < n; ++i) {
        Matrix e = Matrix::Zero(n, n);
        e(i, i) = 1.0;
        consider(e);
    }
    const OptimizeResult omin = optimize_extremum(t, Direction::Min, budget.starts, budget.tol,
                                                  derive_seed(budget.seed, 1), budget.max_iterations);
    const OptimizeResult omax = optimize_extremum(t, Direction::Max, budget.starts, budget.tol,
                                                  derive_seed(budget.seed, 2), budget.max_iterations);
    consider(omin.xi);
    consider(omax.xi);
    v.optimizer_converged = omin.converged && omax.converged;
    v.best_min = lo.value;
    v.best_max = hi.value;
    v.argmin = lo.xi;
    v.argmax = hi.xi;

    const bool lower_side = cond.relation == Relation::Greater || cond.relation == Relation::GreaterEq;
    const bool strict = cond.relation == Relation::Greater || cond.relation == Relation::Less;
    // Bound and sampled value that matter for the condition, as violations.
    const double bound_violation = violation(cond, lower_side ? sb.lower : sb.upper);
    const double worst_violation = violation(cond, lower_side ? lo.value : hi.value);

    const bool certified = strict ? bound_violation < -kStrictnessMargin
                                  : bound_violation <= kStrictnessMargin;
    v.envelope_satisfies = strict ? worst_violation < 0.0 : worst_violation <= kStrictnessMargin;
    if (certified) {
        v.status = Status::Certified;
        v.evidence = "spectral_certificate";
    } else if (worst_violation >= kStrictnessMargin) {
        v.status = Status::Refuted;
        v.evidence = "witness";
        v.witness = lower_side ? lo.xi : hi.xi;
        v.witness_value = quad_form(t, *v.witness);
    } else {
        v.status = Status::Inconclusive;
        v.evidence = "sampling_and_optimization";
    }
    return v;
}

// ---------------------------------------------------------------------------
// Constant real bisectional curvature

ConstantRbcReport constant_rbc_check(const MetricSpec& spec, const Point& p, double c,
                                     double tolerance)
{
    ConstantRbcReport r;
    r.c = c;
    r.tolerance = tolerance;
    const MetricJet j = jet(spec, p);
    const int n = j.dim();
    const ChernTensor tu = unitary_chern_tensor(j);
    const SymmetryReport sym = symmetry_report(tu, c);
    r.pattern_residual = sym.constant_pattern;

    const std::vector<cplx> d = torsion_anti_derivative(j);
    const Matrix& ginv = j.g_inv.matrix();
    cplx trace(0.0, 0.0);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            cplx deta(0.0, 0.0); // d eta_i / d zb_l
            for (int k = 0; k < n; ++k)
                deta += d[static_cast<std::size_t>(((k * n + k) * n + i) * n + l)];
            trace += ginv(l, i) * deta;
        }
    trace *= kTorsionFactor;
    r.eta_trace = trace.real();
    r.eta_trace_residual = std::abs(trace + 0.5 * c * n * (n - 1));
    const TorsionData td = torsion_eta(j);
    r.eta_norm = kTorsionFactor * td.eta.norm();

    bool ok = r.pattern_residual <= tolerance && r.eta_trace_residual <= tolerance;
    if (c == 0.0) {
        const RicciTriple ric = ricci(tu, HermitianMatrix::identity(n));
        r.ric1_norm = ric.ric1.cwiseAbs().maxCoeff();
        r.ric2_norm = ric.ric2.cwiseAbs().maxCoeff();
        r.ric3_norm = ric.ric3.cwiseAbs().maxCoeff();
        r.skew_residual = sym.skew;
        ok = ok && *r.ric1_norm <= tolerance && *r.ric2_norm <= tolerance &&
             *r.ric3_norm <= tolerance && *r.skew_residual <= tolerance;
    }
    r.consistent = ok;
    return r;
}

// ---------------------------------------------------------------------------
// Region scans

ScanResult scan(const MetricSpec& spec, const Region& region, const Condition& cond,
                const Budget& budget)
{
    if (spec.domain_radius() && region.radius > *spec.domain_radius()) {
        std::ostringstream os;
        os << "region radius " << region.radius << " exceeds the validity radius "
           << *spec.domain_radius() << " of metric '" << spec.name() << "'";
        throw InputError(os.str());
    }
    ScanResult out;
    const auto pts = region_points(spec.dim(), region, derive_seed(budget.seed, 0x5ca9));
    for (std::size_t idx = 0; idx < pts.size(); ++idx) {
        Budget b = budget;
        b.seed = derive_seed(budget.seed, 1000 + idx);
        const ChernTensor tu = unitary_chern_tensor(jet(spec, pts[idx]));
        Verdict v = certify_sign(tu, cond, b);
        switch (v.status) {
        case Status::Certified:
            ++out.certified;
            break;
        case Status::Refuted:
            ++out.refuted;
            break;
        default:
            ++out.inconclusive;
        }
        if (v.status == Status::Certified || v.envelope_satisfies)
            ++out.satisfied_everywhere_sampled;
        const bool lower_side =
            cond.relation == Relation::Greater || cond.relation == Relation::GreaterEq;
        if (violation(cond, lower_side ? v.best_min : v.best_max) < -kStrictnessMargin)
            ++out.strictly_beyond;
        out.points.push_back({pts[idx], std::move(v)});
    }
    const int total = static_cast<int>(out.points.size());
    std::ostringstream os;
    if (out.refuted > 0) {
        os << to_string(cond) << " fails at " << out.refuted << " of " << total
           << " sampled points (explicit witnesses)";
    } else if (out.certified == total) {
        os << to_string(cond) << " certified at all " << total << " sampled points";
    } else {
        os << to_string(cond) << " holds on the sampling/optimization envelope at "
           << out.satisfied_everywhere_sampled << " of " << total << " sampled points ("
           << out.certified << " certified), strictly past the threshold at " << out.strictly_beyond
           << "; evidence only, not a proof";
    }
    out.summary = os.str();
    return out;
}

} // namespace rbc
