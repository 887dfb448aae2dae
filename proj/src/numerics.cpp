#include <rbc/numerics.hpp>

#include <rbc/errors.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rbc {

double hermitian_asymmetry(const Matrix& m)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i; j < m.cols(); ++j)
            worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    return worst;
}

HermitianMatrix::HermitianMatrix(const Matrix& m, double tol)
{
    if (m.rows() != m.cols())
        throw NumericalError("Hermitian matrix must be square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = hermitian_asymmetry(m);
    if (asym > tol * scale) {
        std::ostringstream os;
        os << "matrix is not Hermitian: max asymmetry " << asym << " exceeds " << tol * scale;
        throw NumericalError(os.str());
    }
    m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n)
{
    return HermitianMatrix(Matrix::Identity(n, n));
}

EigenDecomposition eigh(const HermitianMatrix& m)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
    if (solver.info() != Eigen::Success)
        throw NumericalError("Hermitian eigendecomposition failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

void require_pd(const HermitianMatrix& m, double min_eigenvalue)
{
    const double lo = eigh(m).values(0);
    if (!(lo > min_eigenvalue)) {
        std::ostringstream os;
        os << "matrix is not positive definite: min eigenvalue " << lo;
        throw NumericalError(os.str());
    }
}

} // namespace

HermitianMatrix invert_pd(const HermitianMatrix& m, double min_eigenvalue)
{
    require_pd(m, min_eigenvalue);
    Eigen::LLT<Matrix> llt(m.matrix());
    const Matrix inv = llt.solve(Matrix::Identity(m.dim(), m.dim()));
    return HermitianMatrix(inv, 1e-8);
}

UnitaryFrame unitary_frame(const HermitianMatrix& m, const Point& tag, double min_eigenvalue)
{
    require_pd(m, min_eigenvalue);
    Eigen::LLT<Matrix> llt(m.matrix());
    const Matrix upper = llt.matrixL().adjoint();
    const Matrix E = upper.triangularView<Eigen::Upper>().solve(
        Matrix::Identity(m.dim(), m.dim()));
    return {E, tag};
}

Matrix random_unitary(Eigen::Index n, Rng& rng)
{
    Matrix z(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            z(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double a = std::abs(r(j, j));
        const cplx phase = a > 0.0 ? r(j, j) / a : cplx(1.0, 0.0);
        q.col(j) *= phase;
    }
    // One Gram-Schmidt sweep keeps U^dagger U = I at the 1e-15 level.
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < j; ++k)
            q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
        q.col(j) /= q.col(j).norm();
    }
    return q;
}

Matrix random_unitary(Eigen::Index n, std::uint64_t seed)
{
    Rng rng(seed);
    return random_unitary(n, rng);
}

Matrix random_hermitian(Eigen::Index n, Rng& rng)
{
    Matrix a(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            a(i, j) = rng.complex_normal();
    return 0.5 * (a + a.adjoint());
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream)
{
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace rbc
