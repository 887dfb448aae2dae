#include <rbc/report.hpp>

#include <rbc/errors.hpp>

namespace rbc {

Json to_json(cplx z)
{
    return Json::array({z.real(), z.imag()});
}

Json to_json(const Vector& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(to_json(v(i)));
    return out;
}

Json to_json(const RealVector& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

Json to_json(const Matrix& m)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(to_json(m(i, j)));
        out.push_back(row);
    }
    return out;
}

Json tensor_json(const ChernTensor& t)
{
    Json out = Json::array();
    for (int i = 0; i < t.n; ++i) {
        Json a = Json::array();
        for (int j = 0; j < t.n; ++j) {
            Json b = Json::array();
            for (int k = 0; k < t.n; ++k) {
                Json c = Json::array();
                for (int l = 0; l < t.n; ++l)
                    c.push_back(to_json(t(i, j, k, l)));
                b.push_back(c);
            }
            a.push_back(b);
        }
        out.push_back(a);
    }
    return out;
}

Json convention_block()
{
    static const double fs_constant = [] {
        const MetricSpec fs = catalog("fubini_study_affine", {{"n", 1}});
        const MetricJet j = jet(fs, Point::Zero(1));
        return hsc(chern_tensor(j), j.g, Vector::Ones(1));
    }();
    Json c;
    c["curvature_index_order"] =
        "R[i][j][k][l] = R_{i jbar k lbar} = -d_i d_jbar g_{k lbar} + g^{p qbar} d_i g_{k qbar} "
        "d_jbar g_{p lbar}; the first pair carries the derivative directions";
    c["metric_entry"] = "g[i][j] = g_{i jbar}";
    c["connection"] = "Gamma^k_{ij} = g^{k qbar} d_i g_{j qbar}";
    c["torsion_factor"] = kTorsionFactor;
    c["torsion"] = "T^k_{ij} = torsion_factor * (Gamma^k_{ij} - Gamma^k_{ji}) in the torsion identities";
    c["ricci"] = "Ric1 = g^{k lbar} R_{i jbar k lbar}, Ric2 = g^{k lbar} R_{k lbar i jbar}, "
                 "Ric3 = g^{k lbar} R_{i lbar k jbar}";
    c["quadratic_form_normalization"] = "tr(xi^2) = sum |xi_ij|^2";
    c["fs_potential"] = "log(1+|z|^2)";
    c["fs_hsc_constant"] = fs_constant;
    c["complex_encoding"] = "[re, im]";
    return c;
}

Json to_json(const SymmetryReport& r)
{
    Json j;
    j["operation"] = "symmetry_report";
    j["tolerance_class"] = "symmetry";
    j["pair_hermitian"] = r.pair_hermitian;
    j["kahler_like"] = r.kahler_like;
    j["skew"] = r.skew;
    j["constant_pattern"] = r.constant_pattern;
    j["c"] = r.c;
    return j;
}

Json to_json(const RicciTriple& r)
{
    Json j;
    j["operation"] = "ricci";
    j["tolerance_class"] = "symmetry";
    j["ric1"] = to_json(r.ric1);
    j["ric2"] = to_json(r.ric2);
    j["ric3"] = to_json(r.ric3);
    j["hermitian_asymmetry"] = {{"ric1", hermitian_asymmetry(r.ric1)},
                                {"ric2", hermitian_asymmetry(r.ric2)},
                                {"ric3", hermitian_asymmetry(r.ric3)}};
    return j;
}

Json to_json(const Verdict& v)
{
    Json j;
    j["operation"] = "certify_sign";
    j["condition"] = to_string(v.condition);
    j["status"] = to_string(v.status);
    j["evidence"] = v.evidence;
    j["spectral_lower"] = v.spectral_lower;
    j["spectral_upper"] = v.spectral_upper;
    j["best_min"] = v.best_min;
    j["best_max"] = v.best_max;
    j["envelope_satisfies"] = v.envelope_satisfies;
    j["optimizer_converged"] = v.optimizer_converged;
    if (v.witness) {
        j["witness"] = to_json(*v.witness);
        j["witness_value"] = v.witness_value;
    } else {
        j["witness"] = nullptr;
    }
    j["argmin"] = to_json(v.argmin);
    j["argmax"] = to_json(v.argmax);
    j["samples"] = v.samples;
    j["starts"] = v.starts;
    j["seed"] = v.seed;
    j["margin"] = kStrictnessMargin;
    return j;
}

Json to_json(const ScanResult& s)
{
    Json j;
    j["operation"] = "scan";
    j["summary"] = s.summary;
    j["certified"] = s.certified;
    j["refuted"] = s.refuted;
    j["inconclusive"] = s.inconclusive;
    j["satisfied_on_envelope"] = s.satisfied_everywhere_sampled;
    j["strictly_beyond_threshold"] = s.strictly_beyond;
    Json pts = Json::array();
    for (const ScanPoint& p : s.points) {
        Json e;
        e["point"] = to_json(Vector(p.p));
        e["verdict"] = to_json(p.verdict);
        pts.push_back(e);
    }
    j["points"] = pts;
    return j;
}

Json to_json(const ConstantRbcReport& r)
{
    Json j;
    j["operation"] = "constant_rbc_check";
    j["tolerance_class"] = "symmetry";
    j["c"] = r.c;
    j["pattern_residual"] = r.pattern_residual;
    j["eta_trace"] = r.eta_trace;
    j["eta_trace_residual"] = r.eta_trace_residual;
    j["eta_norm"] = r.eta_norm;
    if (r.ric1_norm) {
        j["ric1_norm"] = *r.ric1_norm;
        j["ric2_norm"] = *r.ric2_norm;
        j["ric3_norm"] = *r.ric3_norm;
        j["skew_residual"] = *r.skew_residual;
    }
    j["tolerance"] = r.tolerance;
    j["consistent"] = r.consistent;
    return j;
}

Json to_json(const MomentEstimate& e)
{
    Json j;
    j["value"] = to_json(e.value);
    j["std_error"] = e.std_error;
    j["samples"] = e.samples;
    j["seed"] = e.seed;
    return j;
}

Json to_json(const BergerReport& r)
{
    Json j;
    j["operation"] = "berger_check";
    j["monte_carlo"] = to_json(r.mc);
    j["closed_form"] = r.closed_form;
    j["deviation_in_std_errors"] = r.deviation_in_se;
    j["gate"] = "3 standard errors + 1e-4";
    j["agree"] = r.agree;
    return j;
}

Json to_json(const SchwarzReport& r)
{
    Json j;
    j["operation"] = "schwarz_inequality_report";
    j["tolerance_class"] = "finite_difference";
    j["bounds"] = {{"lambda", r.bounds.lambda}, {"mu", r.bounds.mu}, {"kappa", r.bounds.kappa}};
    j["rank"] = r.rank;
    j["verified_points"] = r.verified_points;
    j["worst_conclusion_residual"] = r.worst_conclusion;
    j["worst_log_conclusion_residual"] = r.worst_log_conclusion;
    j["notices"] = r.notices;
    Json pts = Json::array();
    for (const SchwarzPoint& p : r.points) {
        Json e;
        e["point"] = to_json(Vector(p.p));
        e["u"] = p.u;
        e["ricci_hypothesis_min_eigenvalue"] = p.hyp_ricci_min_eigenvalue;
        e["ricci_hypothesis"] = p.hyp_ricci;
        e["curvature_hypothesis_status"] = to_string(p.hyp_curvature_status);
        e["curvature_hypothesis"] = p.hyp_curvature;
        e["hypotheses_verified"] = p.hypotheses_verified;
        e["cauchy_schwarz_gap"] = p.cauchy_schwarz_gap;
        e["rank_bound_lhs"] = p.rank_lhs;
        e["rank_bound_rhs"] = p.rank_rhs;
        e["rank_form_vs_direct"] = p.rank_vs_direct;
        e["box_u"] = p.box_u;
        e["conclusion_residual"] = p.conclusion_residual;
        if (p.log_conclusion_residual)
            e["log_conclusion_residual"] = *p.log_conclusion_residual;
        else
            e["log_conclusion_residual"] = nullptr;
        pts.push_back(e);
    }
    j["points"] = pts;
    return j;
}

Json to_json(const SupBoundReport& r)
{
    Json j;
    j["operation"] = "sup_bound_check";
    j["max_u"] = r.max_u;
    j["corollary_bound"] = r.corollary_bound ? Json(*r.corollary_bound) : Json(nullptr);
    j["rank_bound"] = r.rank_bound ? Json(*r.rank_bound) : Json(nullptr);
    j["classification"] = r.classification;
    return j;
}

cplx complex_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != 2)
        throw InputError("complex numbers must be encoded as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Matrix matrix_from_json(const Json& j)
{
    if (!j.is_array() || j.empty())
        throw InputError("matrix must be a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(i)].size()) != cols)
            throw InputError("matrix rows have different lengths");
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = complex_from_json(j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
    }
    return m;
}

} // namespace rbc
