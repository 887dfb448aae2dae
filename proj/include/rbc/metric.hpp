#pragma once

#include <rbc/expr.hpp>
#include <rbc/numerics.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace rbc {

/// Hermitian metric on a chart. Only entries with i <= j are stored; the
/// lower triangle is the conjugate expression, so g_{j i} = conj(g_{i j})
/// holds by construction. Entry (i, j) is the component g_{i jbar}.
class MetricSpec {
  public:
    MetricSpec(std::string name, int n, ParamMap params,
               const std::vector<std::vector<std::string>>& entries_upper,
               std::optional<double> domain_radius = std::nullopt);

    const std::string& name() const { return name_; }
    int dim() const { return n_; }
    const ParamMap& params() const { return params_; }
    const std::optional<double>& domain_radius() const { return radius_; }

    /// Entry expression; for i > j this is conjugate(entry(j, i)).
    Expr entry(int i, int j) const;
    /// Source text of the stored upper-triangle entry (i <= j).
    const std::string& entry_text(int i, int j) const;

    bool contains(const Point& p) const;

  private:
    std::string name_;
    int n_;
    ParamMap params_;
    std::vector<Expr> upper_;
    std::vector<std::string> upper_text_;
    std::optional<double> radius_;

    std::size_t slot(int i, int j) const;
};

/// Pointwise metric data: g, its first Wirtinger derivatives and mixed second
/// derivatives. Matrix entries (k, l) always mean the component g_{k lbar}.
struct MetricJet {
    Point p;
    HermitianMatrix g;
    std::vector<Matrix> dg_hol;  // [i] -> d g / d z_i
    std::vector<Matrix> dg_anti; // [j] -> d g / d zb_j
    std::vector<Matrix> ddg;     // [i * n + j] -> d^2 g / d z_i d zb_j
    /// Ordinary matrix inverse of g. The inverse metric g^{p qbar} is g_inv(q, p).
    HermitianMatrix g_inv;

    int dim() const { return static_cast<int>(g.dim()); }
    const Matrix& mixed(int i, int j) const { return ddg[static_cast<std::size_t>(i * dim() + j)]; }
};

/// Jet from exact Wirtinger derivatives. Throws InputError outside the
/// domain radius and NumericalError if g(p) is not positive definite.
MetricJet jet(const MetricSpec& spec, const Point& p);

/// Same assembly from central differences (independent cross-check).
MetricJet fd_jet(const MetricSpec& spec, const Point& p, double step);

/// Value of g only.
HermitianMatrix metric_value(const MetricSpec& spec, const Point& p);

/// Largest violation of the MetricJet invariants.
double jet_invariant_residual(const MetricJet& j);

// ---------------------------------------------------------------------------
// Catalog

struct CatalogParameter {
    std::string name;
    std::string range;
    double example;
};

struct CatalogEntry {
    std::string name;
    std::string description;
    std::string formula;
    std::vector<CatalogParameter> parameters;
    std::optional<double> validity_radius;
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& catalog_entry(const std::string& name);

/// Builds a catalog metric. Throws InputError on an unknown name, a missing
/// parameter or a parameter outside its admissible range.
MetricSpec catalog(const std::string& name, const ParamMap& params);

/// Parameters of the entry filled with their example values, overridden by `params`.
ParamMap with_example_params(const CatalogEntry& entry, const ParamMap& params);

// ---------------------------------------------------------------------------
// Files

MetricSpec metric_from_json(const nlohmann::json& j);
nlohmann::json metric_to_json(const MetricSpec& spec);
MetricSpec load_metric_file(const std::string& path);

// ---------------------------------------------------------------------------
// Sampling regions and validation

struct Region {
    double radius = 0.1;
    int count = 100;
    bool grid = false;
};

/// Points of the ball |z| <= radius in C^n: uniform random (seeded) or a
/// deterministic lattice truncated to `count` points.
std::vector<Point> region_points(int n, const Region& region, std::uint64_t seed);

struct ValidationReport {
    int samples = 0;
    double min_eigenvalue = 0.0;
    double max_asymmetry = 0.0;
    double max_diagonal_imaginary = 0.0;
    std::optional<Point> first_failure;
    std::string failure_reason;
    bool ok() const { return !first_failure.has_value(); }
};

ValidationReport validate(const MetricSpec& spec, double radius, int count, std::uint64_t seed);

} // namespace rbc
