#pragma once

// Pointwise checks of the Schwarz calculation for a holomorphic map
// f: (C^m, g) -> (C^n, h) given by explicit components.

#include <rbc/certify.hpp>
#include <rbc/curvature.hpp>
#include <rbc/expr.hpp>
#include <rbc/metric.hpp>

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace rbc {

class MapSpec {
  public:
    /// Components are expressions in z1..zm; conjugated variables are rejected.
    MapSpec(std::string name, int m, int n, const std::vector<std::string>& components,
            const ParamMap& params = {});

    static MapSpec identity(int n);

    const std::string& name() const { return name_; }
    int domain_dim() const { return m_; }
    int target_dim() const { return n_; }
    const std::vector<std::string>& component_text() const { return text_; }
    const Expr& component(int a) const { return comps_[static_cast<std::size_t>(a)]; }
    /// d f_a / d z_i
    const Expr& first(int a, int i) const;
    /// d^2 f_a / d z_i d z_j
    const Expr& second(int a, int i, int j) const;

    Point apply(const Point& p) const;

  private:
    std::string name_;
    int m_;
    int n_;
    std::vector<std::string> text_;
    std::vector<Expr> comps_;
    std::vector<Expr> d1_;
    std::vector<Expr> d2_;
};

/// {"domain_dim": m, "target_dim": n, "components": [...], optional "name", "parameters"}
MapSpec map_from_json(const nlohmann::json& j);
MapSpec load_map_file(const std::string& path);

struct MapJet {
    Point p;
    Point fp;
    Matrix df;               // n x m, (a, i) -> f^a_i
    std::vector<Matrix> d2f; // [a] m x m, (i, j) -> d_j f^a_i
};

MapJet map_jet(const MapSpec& f, const Point& p);

/// Pullback Phi_{i jbar} = sum h_{a bbar} f^a_i conj(f^b_j).
Matrix pullback(const HermitianMatrix& h, const Matrix& df);

/// u = g^{i jbar} Phi_{i jbar}.
double trace_u(const MetricJet& gj, const MetricJet& hj, const MapJet& mj);
/// u from metric values only (used for finite differences).
double trace_u(const HermitianMatrix& g, const HermitianMatrix& h, const Matrix& df);

struct NablaDf {
    std::vector<Matrix> components; // [a] m x m, (i, j) -> (nabla df)^a_{ij}
    double norm2 = 0.0;
};

NablaDf nabla_df(const MetricJet& gj, const MetricJet& hj, const MapJet& mj);

/// Complex Laplacian g^{i jbar}(p) d_i d_jbar of an arbitrary function by
/// central differences; with `richardson` the combination (4 D(h/2) - D(h)) / 3.
double box_fd(const ChartFunction& fn, const HermitianMatrix& g_inv, const Point& p, double step,
              bool richardson);

/// u as a function on the domain chart.
ChartFunction u_function(const MetricSpec& g, const MetricSpec& h, const MapSpec& f);

double box_u_fd(const MetricSpec& g, const MetricSpec& h, const MapSpec& f, const Point& p,
                double step, bool richardson = false);

struct BochnerTerms {
    double u = 0.0;
    double nabla_norm2 = 0.0;
    double ricci_term = 0.0;     // Ric2_{k lbar} g^{k qbar} g^{p lbar} Phi_{p qbar}
    double curvature_term = 0.0; // R^h(Psi, Psi), Psi^{a bbar} = g^{i jbar} f^a_i conj(f^b_j)
    double rhs() const { return nabla_norm2 + ricci_term - curvature_term; }
};

BochnerTerms bochner_terms(const MetricSpec& g, const MetricSpec& h, const MapSpec& f,
                           const Point& p);

struct BochnerResidual {
    double box_u = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    bool richardson = false;
};

/// |box u - RHS|; retried with Richardson refinement if above `tol`.
BochnerResidual bochner_residual(const MetricSpec& g, const MetricSpec& h, const MapSpec& f,
                                 const Point& p, double step = 1e-3, double tol = 1e-4);

struct KatoReport {
    double u = 0.0;
    double grad_u_norm2 = 0.0; // |du|_g^2
    double nabla_norm2 = 0.0;
    double gap = 0.0;          // |nabla df|^2 - |du|_g^2 / u
    double box_log_u = 0.0;
    double lemma_rhs = 0.0;    // (ricci_term - curvature_term) / u
    double lemma_residual = 0.0; // box_log_u - lemma_rhs
    bool critical = false;
};

KatoReport kato_check(const MetricSpec& g, const MetricSpec& h, const MapSpec& f, const Point& p,
                      double step = 1e-3);

struct SchwarzBounds {
    double lambda = 0.0;
    double mu = 0.0;
    double kappa = 0.0;
};

/// Numerical rank of df (singular values > 1e-8 in unitary frames).
int numerical_rank(const MetricJet& gj, const MetricJet& hj, const MapJet& mj);

/// sum |Phi_{p qbar}|^2 - (sum Phi_{p pbar})^2 / m for Phi in a unitary frame.
double cauchy_schwarz_gap(const Matrix& phi_unitary);

struct SchwarzPoint {
    Point p;
    double u = 0.0;
    double hyp_ricci_min_eigenvalue = 0.0; // of Ric2 + lambda g - mu Phi
    bool hyp_ricci = false;
    Status hyp_curvature_status = Status::Inconclusive; // certify(B_h <= -kappa) at f(p)
    bool hyp_curvature = false;
    double cauchy_schwarz_gap = 0.0;
    double rank_lhs = 0.0; // sum R^h_{a abar c cbar} lambda_a^2 lambda_c^2 in canonical frames
    double rank_rhs = 0.0; // -(kappa / r) (sum lambda^2)^2
    double rank_vs_direct = 0.0; // |rank_lhs - curvature term|
    double box_u = 0.0;
    double conclusion_residual = 0.0; // box u + lambda u - (kappa/r + mu/m) u^2
    std::optional<double> log_conclusion_residual;
    bool hypotheses_verified = false;
};

struct SchwarzReport {
    SchwarzBounds bounds;
    int rank = 0;
    std::vector<SchwarzPoint> points;
    int verified_points = 0;
    double worst_conclusion = 0.0;     // over points with verified hypotheses
    double worst_log_conclusion = 0.0; // same, off the critical set
    std::vector<std::string> notices;
};

SchwarzReport schwarz_inequality_report(const MetricSpec& g, const MetricSpec& h, const MapSpec& f,
                                        const std::vector<Point>& points,
                                        const SchwarzBounds& bounds, const Budget& budget,
                                        double step = 1e-3);

struct SupBoundReport {
    double max_u = 0.0;
    std::optional<double> corollary_bound; // m lambda / (kappa + mu)
    std::optional<double> rank_bound;      // r lambda / kappa
    std::string classification;
};

SupBoundReport sup_bound_check(const MetricSpec& g, const MetricSpec& h, const MapSpec& f,
                               const std::vector<Point>& points, const SchwarzBounds& bounds);

} // namespace rbc
