#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace rbc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// A point of a chart in C^n.
using Point = Eigen::VectorXcd;

/// Tolerance ladder shared by all modules. Every check takes one of these
/// by value so callers can override per call.
struct Tolerances {
    double algebraic = 1e-12;
    double decomposition = 1e-10;
    double symmetry = 1e-8;
    double finite_difference = 1e-4;
};

/// Dense Hermitian matrix. Construction symmetrizes inputs that are Hermitian
/// within tolerance and rejects the rest.
class HermitianMatrix {
  public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const Matrix& m, double tol = 1e-12);

    static HermitianMatrix identity(Eigen::Index n);

    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    cplx operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  private:
    Matrix m_;
};

/// Largest |m(i,j) - conj(m(j,i))|.
double hermitian_asymmetry(const Matrix& m);

/// Columns e_1..e_n with E^dagger M E = I for the matrix M the frame was built
/// from. The tag identifies the chart point the frame belongs to.
struct UnitaryFrame {
    Matrix E;
    Point tag;
};

struct EigenDecomposition {
    RealVector values; // ascending
    Matrix vectors;    // unitary
};

EigenDecomposition eigh(const HermitianMatrix& m);

/// Inverse of a positive definite Hermitian matrix.
HermitianMatrix invert_pd(const HermitianMatrix& m, double min_eigenvalue = 1e-12);

/// Frame from the conjugate-transposed Cholesky factor: with M = L L^dagger,
/// E = (L^dagger)^{-1}. Upper triangular, deterministic.
UnitaryFrame unitary_frame(const HermitianMatrix& m, const Point& tag = Point{},
                           double min_eigenvalue = 1e-12);

/// Deterministic random-number source used everywhere a seed is accepted.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return uniform_(engine_); }
    double normal() { return normal_(engine_); }
    cplx complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }
    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Haar-distributed unitary (QR of a complex Ginibre matrix, phases fixed).
Matrix random_unitary(Eigen::Index n, Rng& rng);
Matrix random_unitary(Eigen::Index n, std::uint64_t seed);

/// Random Hermitian matrix with entries of unit scale.
Matrix random_hermitian(Eigen::Index n, Rng& rng);

/// Mix a base seed with a stream index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

} // namespace rbc
