#pragma once

// Sign certification of the real bisectional curvature quadratic form
// Q(xi) = sum R_{i jbar k lbar} xi_ij xi_kl on PSD Hermitian xi with tr(xi^2) = 1.

#include <rbc/curvature.hpp>
#include <rbc/metric.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rbc {

/// Violations at least this large refute a condition.
inline constexpr double kStrictnessMargin = 1e-9;

enum class Relation { Greater, GreaterEq, Less, LessEq };

struct Condition {
    Relation relation = Relation::GreaterEq;
    double c = 0.0;
};

/// Parses pos, nonneg, neg, nonpos, gt:c, ge:c, lt:c, le:c.
Condition parse_condition(const std::string& text);
std::string to_string(const Condition& cond);

enum class Status { Certified, Refuted, Inconclusive };
std::string to_string(Status s);

struct Budget {
    int samples = 100000;
    int starts = 32;
    double tol = 1e-12;
    std::uint64_t seed = 0;
    int max_iterations = 500;
};

/// Orthonormal basis of the real space of n x n Hermitian matrices
/// (Frobenius inner product): E_ii, (E_ij + E_ji)/sqrt2, i(E_ij - E_ji)/sqrt2.
std::vector<Matrix> hermitian_basis(int n);
/// Coordinates of a Hermitian matrix in hermitian_basis(n).
RealVector hermitian_coordinates(const Matrix& xi);
Matrix from_hermitian_coordinates(const RealVector& x, int n);

/// Real symmetric n^2 x n^2 matrix with Q(xi) = x^T Qhat x.
RealMatrix quad_operator(const ChernTensor& t);

struct SpectralBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Extreme eigenvalues of Qhat, widened by the eigen-solver error bound.
SpectralBounds spectral_bounds(const ChernTensor& t);

struct Extremum {
    double value = 0.0;
    Matrix xi;
};

struct SampleExtrema {
    Extremum min;
    Extremum max;
    int count = 0;
};

/// Sample i uses sampler i % 2: a random unitary frame with weights whose
/// squares are uniform on the simplex, or a normalized Gram matrix V V^dagger.
/// Both share one seeded stream, so a larger count extends a smaller one.
SampleExtrema sample_extrema(const ChernTensor& t, int count, std::uint64_t seed);

enum class Direction { Min, Max };

struct OptimizeResult {
    double value = 0.0;
    Matrix xi;
    bool converged = true; // every start stopped on the tolerance, not the cap
    int iterations = 0;    // total over starts
};

/// Multi-start descent on xi = V V^dagger / |V V^dagger|_F with Armijo steps.
OptimizeResult optimize_extremum(const ChernTensor& t, Direction direction, int starts, double tol,
                                 std::uint64_t seed, int max_iterations = 500);

struct Verdict {
    Condition condition;
    Status status = Status::Inconclusive;
    double spectral_lower = 0.0;
    double spectral_upper = 0.0;
    double best_min = 0.0;
    double best_max = 0.0;
    Matrix argmin;
    Matrix argmax;
    std::optional<Matrix> witness;
    double witness_value = 0.0;
    int samples = 0;
    int starts = 0;
    std::uint64_t seed = 0;
    bool optimizer_converged = true;
    /// spectral_certificate | witness | sampling_and_optimization
    std::string evidence;
    /// Whether every sampled and optimized value satisfies the condition.
    bool envelope_satisfies = false;
};

/// Amount by which Q = v violates the condition (positive means violated).
double violation(const Condition& cond, double v);

Verdict certify_sign(const ChernTensor& t, const Condition& cond, const Budget& budget);

struct ConstantRbcReport {
    double c = 0.0;
    double pattern_residual = 0.0;
    double eta_trace = 0.0;          // sum_i eta_{i, ibar} with the torsion factor applied
    double eta_trace_residual = 0.0; // |eta_trace + c n (n-1) / 2|
    double eta_norm = 0.0;
    // Only filled for c = 0.
    std::optional<double> ric1_norm;
    std::optional<double> ric2_norm;
    std::optional<double> ric3_norm;
    std::optional<double> skew_residual;
    bool consistent = false; // all residuals <= tolerance
    double tolerance = 1e-8;
};

ConstantRbcReport constant_rbc_check(const MetricSpec& spec, const Point& p, double c,
                                     double tolerance = 1e-8);

struct ScanPoint {
    Point p;
    Verdict verdict;
};

struct ScanResult {
    std::vector<ScanPoint> points;
    int certified = 0;
    int refuted = 0;
    int inconclusive = 0;
    int satisfied_everywhere_sampled = 0; // points whose envelope satisfies the condition
    int strictly_beyond = 0;              // points with the envelope strictly past c
    std::string summary;
};

/// Throws InputError if the region leaves the metric's validity radius.
ScanResult scan(const MetricSpec& spec, const Region& region, const Condition& cond,
                const Budget& budget);

} // namespace rbc
