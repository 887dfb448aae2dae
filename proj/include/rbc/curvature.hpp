#pragma once

// Chern connection and curvature of a Hermitian metric at a point.
//
// Index conventions:
//   R(i, j, k, l) = R_{i jbar k lbar} = -d_i d_jbar g_{k lbar}
//                   + g^{p qbar} (d_i g_{k qbar}) (d_jbar g_{p lbar})
//   (the first index pair carries the derivative directions),
//   Gamma^k_{ij} = g^{k qbar} d_i g_{j qbar},  T = Gamma - Gamma^T,
//   eta_j = sum_i T^i_{ij}.

#include <rbc/metric.hpp>
#include <rbc/numerics.hpp>

#include <optional>
#include <vector>

namespace rbc {

/// Factor relating T = Gamma - Gamma^T to the torsion in the identity
/// 2 T^k_{ij,lbar} = R_{j lbar i kbar} - R_{i lbar j kbar}. Chosen by
/// calibrate_torsion_factor and frozen here.
inline constexpr double kTorsionFactor = 0.5;

enum class FrameKind { Coordinate, Unitary };

struct ChernTensor {
    int n = 0;
    std::vector<cplx> R; // (i, j, k, l) row-major
    FrameKind frame = FrameKind::Coordinate;
    Point point;
    /// Columns of the unitary frame in coordinates (unitary tensors only).
    Matrix E;

    ChernTensor() = default;
    ChernTensor(int n, FrameKind frame, Point point);

    cplx& operator()(int i, int j, int k, int l) { return R[index(i, j, k, l)]; }
    cplx operator()(int i, int j, int k, int l) const { return R[index(i, j, k, l)]; }
    std::size_t index(int i, int j, int k, int l) const
    {
        return static_cast<std::size_t>(((i * n + j) * n + k) * n + l);
    }
    double max_abs() const;
};

ChernTensor chern_tensor(const MetricJet& j);

/// Frame of g(p)-orthonormal vectors: columns e_a with sum_ij g_{i jbar} E_ia conj(E_jb) = delta_ab.
UnitaryFrame metric_frame(const MetricJet& j);

/// R'_{a bbar c dbar} = sum R_{i jbar k lbar} E_ia conj(E_jb) E_kc conj(E_ld).
/// Throws InputError if the frame is tagged with a different point.
ChernTensor to_frame(const ChernTensor& t, const UnitaryFrame& frame);

/// chern_tensor followed by to_frame(metric_frame).
ChernTensor unitary_chern_tensor(const MetricJet& j);

/// Max |R(i,j,k,l) - conj(R(j,i,l,k))|.
double pair_symmetry_residual(const ChernTensor& t);

struct TorsionData {
    int n = 0;
    std::vector<cplx> gamma; // (k, i, j) -> Gamma^k_{ij}
    std::vector<cplx> T;     // (k, i, j) -> T^k_{ij}
    Vector eta;

    std::size_t index(int k, int i, int j) const
    {
        return static_cast<std::size_t>((k * n + i) * n + j);
    }
    cplx Gamma(int k, int i, int j) const { return gamma[index(k, i, j)]; }
    cplx Torsion(int k, int i, int j) const { return T[index(k, i, j)]; }
    double torsion_norm() const;
};

/// Connection coefficients only; T and eta are left zero.
TorsionData connection(const MetricJet& j);
/// Connection, torsion and the Gauduchon 1-form.
TorsionData torsion_eta(const MetricJet& j);

/// d T^k_{ij} / d zb_l, indexed (k, i, j, l), from exact jets.
std::vector<cplx> torsion_anti_derivative(const MetricJet& j);

/// max |sigma * 2 * (lowered dT) - (R_{j lbar i qbar} - R_{i lbar j qbar})|.
double torsion_identity_residual(const MetricJet& j, double sigma = kTorsionFactor);
double torsion_identity_residual(const MetricSpec& spec, const Point& p,
                                 double sigma = kTorsionFactor);

/// The candidate in {1, 1/2} with the smallest worst-case residual over the points.
double calibrate_torsion_factor(const MetricSpec& spec, const std::vector<Point>& points);

struct RicciTriple {
    Matrix ric1;
    Matrix ric2;
    Matrix ric3;
    /// Largest Hermitian asymmetry among the three.
    double max_asymmetry() const;
};

/// Traces with the inverse metric: Ric1 = g^{k lbar} R_{i jbar k lbar},
/// Ric2 = g^{k lbar} R_{k lbar i jbar}, Ric3 = g^{k lbar} R_{i lbar k jbar}.
/// Pass the identity for a unitary-frame tensor.
RicciTriple ricci(const ChernTensor& t, const HermitianMatrix& g);

/// H(v) = R(v, vbar, v, vbar) / |v|_g^4 for a coordinate tensor.
double hsc(const ChernTensor& t, const HermitianMatrix& g, const Vector& v);

struct FrameWeights {
    UnitaryFrame frame;
    RealVector a;
};

/// B = sum R_{i ibar k kbar} a_i a_k / |a|^2 for a tensor already in a unitary frame.
double rbc_value(const ChernTensor& t, const RealVector& a);
/// Checks that t is expressed in w.frame first.
double rbc_value(const ChernTensor& t, const FrameWeights& w);

/// Q(xi) = sum R_{i jbar k lbar} xi_ij xi_kl for any Hermitian xi, no checks.
double quad_form_raw(const ChernTensor& t, const Matrix& xi);
/// Q(xi) for a PSD direction (min eigenvalue >= -1e-10, tr xi^2 = 1 within 1e-10).
double quad_form(const ChernTensor& t, const Matrix& xi);
void require_psd_direction(const Matrix& xi);

/// sum_{i,k} (R_{i ibar k kbar} + R_{i kbar k ibar}) a_i a_k.
double h_positive_pairsum(const ChernTensor& t, const RealVector& a);

struct SymmetryReport {
    double pair_hermitian = 0.0;
    double kahler_like = 0.0;
    double skew = 0.0;
    double constant_pattern = 0.0;
    double c = 0.0;
};

/// The constant pattern R_{i jbar k lbar} + R_{k lbar i jbar} = 2c delta_il delta_kj
/// is only meaningful in a unitary frame.
SymmetryReport symmetry_report(const ChernTensor& t, double c = 0.0);

} // namespace rbc
