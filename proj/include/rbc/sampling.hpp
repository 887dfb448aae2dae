#pragma once

// Monte Carlo over the unit sphere of C^n, which realizes the unit-volume
// Fubini-Study measure of P^{n-1} for scale- and phase-invariant integrands.

#include <rbc/curvature.hpp>
#include <rbc/numerics.hpp>

#include <cstdint>
#include <vector>

namespace rbc {

/// Uniform unit vectors from normalized complex Gaussians.
class SphereSampler {
  public:
    SphereSampler(int n, std::uint64_t seed);
    Vector next();

  private:
    int n_;
    Rng rng_;
};

std::vector<Vector> sphere_sample(int n, int count, std::uint64_t seed);

struct MomentEstimate {
    cplx value{};
    double std_error = 0.0;
    int samples = 0;
    std::uint64_t seed = 0;
};

/// Acceptance band used for Monte Carlo comparisons: 3 standard errors plus 1e-4.
bool within_band(const MomentEstimate& est, cplx target);

/// (delta_ij delta_kl + delta_il delta_kj) / (n (n + 1)), zero-based indices.
double fs_moment_exact(int n, int i, int j, int k, int l);

/// Estimate of E[w_i conj(w_j) w_k conj(w_l)] over the unit sphere. When
/// `rotation` is given each sample w is replaced by rotation * w.
MomentEstimate fs_moment(int n, int i, int j, int k, int l, int count, std::uint64_t seed,
                         const Matrix* rotation = nullptr);

struct BergerReport {
    MomentEstimate mc;       // average of R(v, vbar, v, vbar), v_i = b_i w_i
    double closed_form = 0.0; // sum_{i,k} (R_{i ibar k kbar} + R_{i kbar k ibar}) b_i^2 b_k^2 / (n (n + 1))
    double deviation_in_se = 0.0;
    bool agree = false;
};

BergerReport berger_check(const ChernTensor& t, const RealVector& b, int count, std::uint64_t seed);

/// Random tensor with R(i,j,k,l) = conj(R(j,i,l,k)), expressed in a unitary frame.
ChernTensor random_pair_symmetric_tensor(int n, Rng& rng);

} // namespace rbc
