#include <rbc/curvature.hpp>

#include <rbc/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rbc {

ChernTensor::ChernTensor(int n_, FrameKind frame_, Point point_)
    : n(n_), R(static_cast<std::size_t>(n_ * n_ * n_ * n_), cplx(0.0, 0.0)), frame(frame_),
      point(std::move(point_))
{
}

double ChernTensor::max_abs() const
{
    double m = 0.0;
    for (const cplx& v : R)
        m = std::max(m, std::abs(v));
    return m;
}

ChernTensor chern_tensor(const MetricJet& j)
{
    const int n = j.dim();
    ChernTensor t(n, FrameKind::Coordinate, j.p);
    const Matrix& ginv = j.g_inv.matrix();
    for (int a = 0; a < n; ++a) {
        const Matrix left = j.dg_hol[static_cast<std::size_t>(a)] * ginv;
        for (int b = 0; b < n; ++b) {
            const Matrix slice = -j.mixed(a, b) + left * j.dg_anti[static_cast<std::size_t>(b)];
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    t(a, b, k, l) = slice(k, l);
        }
    }
    return t;
}

UnitaryFrame metric_frame(const MetricJet& j)
{
    return unitary_frame(HermitianMatrix(j.g.matrix().transpose()), j.p);
}

ChernTensor to_frame(const ChernTensor& t, const UnitaryFrame& frame)
{
    const int n = t.n;
    const Matrix& E = frame.E;
    if (E.rows() != n || E.cols() != n)
        throw InputError("frame dimension does not match the curvature tensor");
    if (frame.tag.size() > 0 && t.point.size() > 0 &&
        (frame.tag.size() != t.point.size() || (frame.tag - t.point).norm() > 1e-12))
        throw InputError("frame belongs to a different point than the curvature tensor");

    // Contract one slot at a time; slot s gets E (holomorphic) or conj(E).
    std::vector<cplx> cur = t.R;
    std::vector<cplx> next(cur.size());
    const std::size_t stride[4] = {static_cast<std::size_t>(n * n * n),
                                   static_cast<std::size_t>(n * n), static_cast<std::size_t>(n), 1};
    for (int slot = 0; slot < 4; ++slot) {
        const bool anti = slot % 2 == 1;
        const std::size_t s = stride[slot];
        std::fill(next.begin(), next.end(), cplx(0.0, 0.0));
        for (std::size_t idx = 0; idx < cur.size(); ++idx) {
            const int target = static_cast<int>((idx / s) % static_cast<std::size_t>(n));
            const std::size_t base = idx - static_cast<std::size_t>(target) * s;
            cplx acc(0.0, 0.0);
            for (int src = 0; src < n; ++src) {
                const cplx e = anti ? std::conj(E(src, target)) : E(src, target);
                acc += cur[base + static_cast<std::size_t>(src) * s] * e;
            }
            next[idx] = acc;
        }
        std::swap(cur, next);
    }
    ChernTensor out(n, FrameKind::Unitary, t.point);
    out.R = std::move(cur);
    out.E = t.frame == FrameKind::Unitary ? Matrix(t.E * E) : E;
    return out;
}

ChernTensor unitary_chern_tensor(const MetricJet& j)
{
    return to_frame(chern_tensor(j), metric_frame(j));
}

double pair_symmetry_residual(const ChernTensor& t)
{
    double worst = 0.0;
    const int n = t.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    worst = std::max(worst, std::abs(t(i, j, k, l) - std::conj(t(j, i, l, k))));
    return worst;
}

// ---------------------------------------------------------------------------
// Connection and torsion

double TorsionData::torsion_norm() const
{
    double m = 0.0;
    for (const cplx& v : T)
        m = std::max(m, std::abs(v));
    return m;
}

TorsionData connection(const MetricJet& j)
{
    const int n = j.dim();
    TorsionData td;
    td.n = n;
    td.gamma.assign(static_cast<std::size_t>(n * n * n), cplx(0.0, 0.0));
    td.T.assign(td.gamma.size(), cplx(0.0, 0.0));
    td.eta = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
        const Matrix m = j.dg_hol[static_cast<std::size_t>(i)] * j.g_inv.matrix();
        for (int jj = 0; jj < n; ++jj)
            for (int k = 0; k < n; ++k)
                td.gamma[td.index(k, i, jj)] = m(jj, k);
    }
    return td;
}

TorsionData torsion_eta(const MetricJet& j)
{
    TorsionData td = connection(j);
    const int n = td.n;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < n; ++jj)
                td.T[td.index(k, i, jj)] = td.Gamma(k, i, jj) - td.Gamma(k, jj, i);
    for (int jj = 0; jj < n; ++jj)
        for (int i = 0; i < n; ++i)
            td.eta(jj) += td.Torsion(i, i, jj);
    return td;
}

std::vector<cplx> torsion_anti_derivative(const MetricJet& j)
{
    const int n = j.dim();
    const Matrix& ginv = j.g_inv.matrix();
    // d_lbar (A_i Ginv) = (ddg[i][l] - A_i Ginv B_l) Ginv, entry (j, k) is d_lbar Gamma^k_{ij}.
    std::vector<Matrix> dgamma(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i) {
        const Matrix left = j.dg_hol[static_cast<std::size_t>(i)] * ginv;
        for (int l = 0; l < n; ++l)
            dgamma[static_cast<std::size_t>(i * n + l)] =
                (j.mixed(i, l) - left * j.dg_anti[static_cast<std::size_t>(l)]) * ginv;
    }
    std::vector<cplx> out(static_cast<std::size_t>(n * n * n * n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < n; ++jj)
                for (int l = 0; l < n; ++l)
                    out[static_cast<std::size_t>(((k * n + i) * n + jj) * n + l)] =
                        dgamma[static_cast<std::size_t>(i * n + l)](jj, k) -
                        dgamma[static_cast<std::size_t>(jj * n + l)](i, k);
    return out;
}

double torsion_identity_residual(const MetricJet& j, double sigma)
{
    const int n = j.dim();
    const ChernTensor t = chern_tensor(j);
    const std::vector<cplx> d = torsion_anti_derivative(j);
    const Matrix& g = j.g.matrix();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj)
            for (int l = 0; l < n; ++l)
                for (int q = 0; q < n; ++q) {
                    cplx lowered(0.0, 0.0);
                    for (int k = 0; k < n; ++k)
                        lowered += d[static_cast<std::size_t>(((k * n + i) * n + jj) * n + l)] * g(k, q);
                    const cplx rhs = t(jj, l, i, q) - t(i, l, jj, q);
                    worst = std::max(worst, std::abs(sigma * 2.0 * lowered - rhs));
                }
    return worst;
}

double torsion_identity_residual(const MetricSpec& spec, const Point& p, double sigma)
{
    return torsion_identity_residual(jet(spec, p), sigma);
}

double calibrate_torsion_factor(const MetricSpec& spec, const std::vector<Point>& points)
{
    if (points.empty())
        throw InputError("torsion calibration needs at least one point");
    double best_sigma = 1.0;
    double best = std::numeric_limits<double>::infinity();
    for (double sigma : {1.0, 0.5}) {
        double worst = 0.0;
        for (const Point& p : points)
            worst = std::max(worst, torsion_identity_residual(spec, p, sigma));
        if (worst < best) {
            best = worst;
            best_sigma = sigma;
        }
    }
    return best_sigma;
}

// ---------------------------------------------------------------------------
// Ricci, HSC, RBC

double RicciTriple::max_asymmetry() const
{
    return std::max({hermitian_asymmetry(ric1), hermitian_asymmetry(ric2), hermitian_asymmetry(ric3)});
}

RicciTriple ricci(const ChernTensor& t, const HermitianMatrix& g)
{
    const int n = t.n;
    if (g.dim() != n)
        throw InputError("metric dimension does not match the curvature tensor");
    const Matrix ginv = invert_pd(g).matrix();
    RicciTriple r{Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const cplx w = ginv(l, k); // g^{k lbar}
                    r.ric1(i, j) += w * t(i, j, k, l);
                    r.ric2(i, j) += w * t(k, l, i, j);
                    r.ric3(i, j) += w * t(i, l, k, j);
                }
    return r;
}

namespace {

cplx quartic(const ChernTensor& t, const Vector& v)
{
    const int n = t.n;
    cplx acc(0.0, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx vij = v(i) * std::conj(v(j));
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    acc += t(i, j, k, l) * vij * v(k) * std::conj(v(l));
        }
    return acc;
}

void require_unitary(const ChernTensor& t, const char* what)
{
    if (t.frame != FrameKind::Unitary)
        throw InputError(std::string(what) + " requires a tensor expressed in a unitary frame");
}

void require_weights(const RealVector& a, int n)
{
    if (a.size() != n)
        throw InputError("weight vector has the wrong length");
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (!(a(i) >= 0.0))
            throw InputError("weights must be nonnegative");
    if (a.squaredNorm() == 0.0)
        throw InputError("weights must not all be zero");
}

} // namespace

double hsc(const ChernTensor& t, const HermitianMatrix& g, const Vector& v)
{
    if (v.size() != t.n || g.dim() != t.n)
        throw InputError("direction dimension does not match the curvature tensor");
    const double norm2 = (v.transpose() * g.matrix() * v.conjugate())(0, 0).real();
    if (!(norm2 > 1e-28))
        throw InputError("degenerate direction: |v|_g <= 1e-14");
    return quartic(t, v).real() / (norm2 * norm2);
}

double rbc_value(const ChernTensor& t, const RealVector& a)
{
    require_unitary(t, "real bisectional curvature");
    require_weights(a, t.n);
    double acc = 0.0;
    for (int i = 0; i < t.n; ++i)
        for (int k = 0; k < t.n; ++k)
            acc += t(i, i, k, k).real() * a(i) * a(k);
    return acc / a.squaredNorm();
}

double rbc_value(const ChernTensor& t, const FrameWeights& w)
{
    require_unitary(t, "real bisectional curvature");
    if (w.frame.E.rows() != t.E.rows() || w.frame.E.cols() != t.E.cols() ||
        (w.frame.E - t.E).cwiseAbs().maxCoeff() > 1e-12)
        throw InputError("curvature tensor is not expressed in the given frame");
    return rbc_value(t, w.a);
}

double quad_form_raw(const ChernTensor& t, const Matrix& xi)
{
    const int n = t.n;
    cplx acc(0.0, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx x = xi(i, j);
            if (x == cplx(0.0, 0.0))
                continue;
            cplx inner(0.0, 0.0);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    inner += t(i, j, k, l) * xi(k, l);
            acc += x * inner;
        }
    return acc.real();
}

void require_psd_direction(const Matrix& xi)
{
    const HermitianMatrix h(xi, 1e-10);
    const double lo = eigh(h).values(0);
    if (lo < -1e-10) {
        std::ostringstream os;
        os << "direction is not positive semidefinite (min eigenvalue " << lo << ")";
        throw InputError(os.str());
    }
    const double tr2 = xi.squaredNorm();
    if (std::abs(tr2 - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "direction is not normalized: tr(xi^2) = " << tr2;
        throw InputError(os.str());
    }
}

double quad_form(const ChernTensor& t, const Matrix& xi)
{
    require_unitary(t, "the curvature quadratic form");
    if (xi.rows() != t.n || xi.cols() != t.n)
        throw InputError("direction dimension does not match the curvature tensor");
    require_psd_direction(xi);
    return quad_form_raw(t, xi);
}

double h_positive_pairsum(const ChernTensor& t, const RealVector& a)
{
    require_unitary(t, "the pair sum");
    require_weights(a, t.n);
    double acc = 0.0;
    for (int i = 0; i < t.n; ++i)
        for (int k = 0; k < t.n; ++k)
            acc += (t(i, i, k, k) + t(i, k, k, i)).real() * a(i) * a(k);
    return acc;
}

SymmetryReport symmetry_report(const ChernTensor& t, double c)
{
    SymmetryReport r;
    r.c = c;
    r.pair_hermitian = pair_symmetry_residual(t);
    const int n = t.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const cplx v = t(i, j, k, l);
                    r.kahler_like = std::max({r.kahler_like, std::abs(v - t(k, j, i, l)),
                                              std::abs(v - t(i, l, k, j))});
                    const cplx swapped = v + t(k, l, i, j);
                    r.skew = std::max(r.skew, std::abs(swapped));
                    const double pattern = (i == l && k == j) ? 2.0 * c : 0.0;
                    r.constant_pattern = std::max(r.constant_pattern, std::abs(swapped - pattern));
                }
    return r;
}

} // namespace rbc
