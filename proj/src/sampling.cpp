#include <rbc/sampling.hpp>

#include <rbc/errors.hpp>

#include <cmath>

namespace rbc {

SphereSampler::SphereSampler(int n, std::uint64_t seed) : n_(n), rng_(seed)
{
    if (n < 1)
        throw InputError("sphere dimension must be at least 1");
}

Vector SphereSampler::next()
{
    Vector w(n_);
    double norm2 = 0.0;
    do {
        for (int i = 0; i < n_; ++i)
            w(i) = rng_.complex_normal();
        norm2 = w.squaredNorm();
    } while (norm2 == 0.0);
    return w / std::sqrt(norm2);
}

std::vector<Vector> sphere_sample(int n, int count, std::uint64_t seed)
{
    if (count < 1)
        throw InputError("sample count must be at least 1");
    SphereSampler s(n, seed);
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int c = 0; c < count; ++c)
        out.push_back(s.next());
    return out;
}

bool within_band(const MomentEstimate& est, cplx target)
{
    return std::abs(est.value - target) <= 3.0 * est.std_error + 1e-4;
}

double fs_moment_exact(int n, int i, int j, int k, int l)
{
    const double num = (i == j && k == l ? 1.0 : 0.0) + (i == l && k == j ? 1.0 : 0.0);
    return num / (n * (n + 1.0));
}

namespace {

/// Running mean and standard error of complex samples (Welford).
class Accumulator {
  public:
    void add(cplx x)
    {
        ++count_;
        const cplx delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        const cplx delta2 = x - mean_;
        m2_ += delta.real() * delta2.real() + delta.imag() * delta2.imag();
    }
    MomentEstimate finish(std::uint64_t seed) const
    {
        MomentEstimate e;
        e.value = mean_;
        e.samples = static_cast<int>(count_);
        e.seed = seed;
        e.std_error = count_ > 1 ? std::sqrt(m2_ / static_cast<double>(count_ - 1) /
                                             static_cast<double>(count_))
                                 : 0.0;
        return e;
    }

  private:
    long long count_ = 0;
    cplx mean_{};
    double m2_ = 0.0;
};

} // namespace

MomentEstimate fs_moment(int n, int i, int j, int k, int l, int count, std::uint64_t seed,
                         const Matrix* rotation)
{
    for (int idx : {i, j, k, l})
        if (idx < 0 || idx >= n)
            throw InputError("moment index out of range 1.." + std::to_string(n));
    if (count < 1)
        throw InputError("sample count must be at least 1");
    if (rotation && (rotation->rows() != n || rotation->cols() != n))
        throw InputError("rotation has the wrong dimension");
    SphereSampler s(n, seed);
    Accumulator acc;
    for (int c = 0; c < count; ++c) {
        Vector w = s.next();
        if (rotation)
            w = (*rotation) * w;
        acc.add(w(i) * std::conj(w(j)) * w(k) * std::conj(w(l)));
    }
    return acc.finish(seed);
}

BergerReport berger_check(const ChernTensor& t, const RealVector& b, int count, std::uint64_t seed)
{
    const int n = t.n;
    if (b.size() != n)
        throw InputError("weight vector has the wrong length");
    for (int i = 0; i < n; ++i)
        if (!(b(i) >= 0.0))
            throw InputError("weights must be nonnegative");
    if (count < 1)
        throw InputError("sample count must be at least 1");

    SphereSampler s(n, seed);
    Accumulator acc;
    for (int c = 0; c < count; ++c) {
        const Vector w = s.next();
        const Vector v = b.cast<cplx>().cwiseProduct(w);
        cplx val(0.0, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const cplx vij = v(i) * std::conj(v(j));
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        val += t(i, j, k, l) * vij * v(k) * std::conj(v(l));
            }
        acc.add(val);
    }
    BergerReport r;
    r.mc = acc.finish(seed);
    double closed = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            closed += (t(i, i, k, k) + t(i, k, k, i)).real() * b(i) * b(i) * b(k) * b(k);
    r.closed_form = closed / (n * (n + 1.0));
    const double diff = std::abs(r.mc.value - r.closed_form);
    r.deviation_in_se = r.mc.std_error > 0.0 ? diff / r.mc.std_error : (diff == 0.0 ? 0.0 : INFINITY);
    r.agree = within_band(r.mc, r.closed_form);
    return r;
}

ChernTensor random_pair_symmetric_tensor(int n, Rng& rng)
{
    ChernTensor x(n, FrameKind::Unitary, Point{});
    x.E = Matrix::Identity(n, n);
    for (cplx& v : x.R)
        v = rng.complex_normal();
    ChernTensor t = x;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    t(i, j, k, l) = 0.5 * (x(i, j, k, l) + std::conj(x(j, i, l, k)));
    return t;
}

} // namespace rbc
