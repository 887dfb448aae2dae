// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <rbc/certify.hpp>
#include <rbc/cli.hpp>
#include <rbc/curvature.hpp>
#include <rbc/errors.hpp>
#include <rbc/report.hpp>
#include <rbc/sampling.hpp>
#include <rbc/schwarz.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace rbc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Detail {
  public:
    template <class T>
    Detail& operator<<(const T& v)
    {
        os_ << v;
        return *this;
    }
    std::string str() const { return os_.str(); }

  private:
    std::ostringstream os_;
};

Point random_point(int n, double radius, Rng& rng)
{
    Point p(n);
    for (int i = 0; i < n; ++i)
        p(i) = rng.complex_normal();
    return p * (radius * std::pow(rng.uniform(), 1.0 / (2 * n)) / p.norm());
}

Vector random_vector(int n, Rng& rng)
{
    Vector v(n);
    for (int i = 0; i < n; ++i)
        v(i) = rng.complex_normal();
    return v;
}

Matrix random_psd_direction(int n, Rng& rng)
{
    Matrix v(n, n);
    const int rank = 1 + static_cast<int>(rng.uniform() * n);
    v.setZero();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < rank; ++j)
            v(i, j) = rng.complex_normal();
    const Matrix xi = v * v.adjoint();
    return xi / xi.norm();
}

MetricSpec ex22(int n) { return catalog("example_2_2", {{"n", n}, {"eps", 0.3}}); }

Budget budget(int samples, int starts, std::uint64_t seed)
{
    Budget b;
    b.samples = samples;
    b.starts = starts;
    b.seed = seed;
    return b;
}

// 1 -------------------------------------------------------------------------
Outcome criterion1()
{
    const ChernTensor t = chern_tensor(jet(ex22(2), Point::Zero(2)));
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    const double want = -(i == j && k == l) + 1.7 * (i == l && k == j);
                    worst = std::max(worst, std::abs(t(i, j, k, l) - want));
                }
    return {worst <= 1e-10, (Detail() << "max entry error " << worst).str()};
}

// 2 -------------------------------------------------------------------------
Outcome criterion2()
{
    const MetricJet j = jet(ex22(2), Point::Zero(2));
    const ChernTensor t = chern_tensor(j);
    Rng rng(2002);
    double worst = 0.0;
    for (int s = 0; s < 100000; ++s)
        worst = std::max(worst, std::abs(hsc(t, j.g, random_vector(2, rng)) - 0.7));
    return {worst <= 1e-9, (Detail() << "100000 directions, max |H - 0.7| = " << worst).str()};
}

// 3 -------------------------------------------------------------------------
Outcome criterion3()
{
    Outcome o;
    Detail d;
    for (int n : {2, 3, 4}) {
        const ChernTensor tu = unitary_chern_tensor(jet(ex22(n), Point::Zero(n)));
        const double want = -n + 2 - 0.3;
        const double b = rbc_value(tu, RealVector(RealVector::Ones(n)));
        const Verdict v = certify_sign(tu, parse_condition("nonneg"), budget(20000, 8, 3000 + n));
        const bool witness_ok = v.witness && std::abs(quad_form(tu, *v.witness) - want) <= 1e-9 &&
                                std::abs(v.witness_value - want) <= 1e-9;
        const bool ok = std::abs(b - want) <= 1e-10 && v.status == Status::Refuted && witness_ok;
        o.pass = o.pass && ok;
        d << "n=" << n << ": B(uniform)=" << b << " verdict=" << to_string(v.status)
          << " witness=" << v.witness_value << "; ";
    }
    o.detail = d.str();
    return o;
}

// 4 -------------------------------------------------------------------------
Outcome criterion4()
{
    const MetricSpec dual = catalog("example_2_2_dual", {{"n", 2}, {"eps", 0.3}});
    Rng rng(4004);
    double max_h = -INFINITY;
    for (int s = 0; s < 1000; ++s) {
        const MetricJet j = jet(dual, random_point(2, 0.05, rng));
        max_h = std::max(max_h, hsc(chern_tensor(j), j.g, random_vector(2, rng)));
    }
    const ChernTensor tu = unitary_chern_tensor(jet(dual, Point::Zero(2)));
    const double q_uniform = rbc_value(tu, RealVector(RealVector::Ones(2)));
    const Verdict v = certify_sign(tu, parse_condition("nonpos"), budget(20000, 8, 4005));
    const bool pass = max_h < 0.0 && v.status == Status::Refuted && v.witness_value > 0.0 && q_uniform > 0.0;
    return {pass, (Detail() << "max H over 1000 pairs = " << max_h << ", Q(uniform) = " << q_uniform
                            << ", certify(B <= 0) " << to_string(v.status) << " with witness " << v.witness_value)
                      .str()};
}

// 5 -------------------------------------------------------------------------
Outcome criterion5()
{
    const MetricSpec s = catalog("example_2_3", {{"b", 1}});
    const MetricJet j = jet(s, Point::Zero(2));
    const ChernTensor t = chern_tensor(j);
    const ChernTensor tu = to_frame(t, metric_frame(j));
    Rng rng(5005);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const Matrix xi = random_psd_direction(2, rng);
        const double x = xi(0, 0).real(), y = xi(1, 1).real();
        const double want = x * x + y * y + 3 * x * y - 4 * std::norm(xi(0, 1));
        worst = std::max(worst, std::abs(quad_form(tu, xi) - want));
    }
    const RicciTriple r = ricci(t, j.g);
    const double ric3 = std::abs(r.ric3(0, 0) - cplx(-1.0, 0.0));
    auto has_minus_one = [](const Matrix& m) {
        for (int i = 0; i < m.rows(); ++i)
            if (std::abs(m(i, i) + 1.0) <= 1e-12)
                return true;
        return false;
    };
    const Verdict v = certify_sign(tu, parse_condition("pos"), budget(1000000, 32, 5006));
    const bool pass = worst <= 1e-10 && ric3 == 0.0 && has_minus_one(r.ric1) && has_minus_one(r.ric2) &&
                      v.status != Status::Refuted && v.best_min > 0.0;
    return {pass, (Detail() << "Q error " << worst << ", Ric3_11 = " << r.ric3(0, 0).real()
                            << ", Ric1 diag (" << r.ric1(0, 0).real() << ", " << r.ric1(1, 1).real()
                            << "), Ric2 diag (" << r.ric2(0, 0).real() << ", " << r.ric2(1, 1).real()
                            << "), 10^6 samples + optimization: min Q = " << v.best_min << " ("
                            << to_string(v.status) << ")")
                      .str()};
}

// 6 -------------------------------------------------------------------------
Outcome criterion6()
{
    const double c_star = convention_block()["fs_hsc_constant"].get<double>();
    Outcome o;
    Detail d;
    d << "c* = " << c_star << "; ";
    Rng rng(6006);
    for (int n : {2, 3}) {
        const MetricSpec fs = catalog("fubini_study_affine", {{"n", n}});
        double tors = 0.0, kahler = 0.0, hmin = INFINITY, hmax = -INFINITY;
        for (int k = 0; k < 100; ++k) {
            const MetricJet j = jet(fs, random_point(n, 1.0, rng));
            const TorsionData td = torsion_eta(j);
            tors = std::max({tors, td.torsion_norm(), td.eta.norm()});
            const ChernTensor t = chern_tensor(j);
            kahler = std::max(kahler, symmetry_report(to_frame(t, metric_frame(j))).kahler_like);
            const double h = hsc(t, j.g, random_vector(n, rng));
            hmin = std::min(hmin, h);
            hmax = std::max(hmax, h);
        }
        const ChernTensor tu = unitary_chern_tensor(jet(fs, Point::Zero(n)));
        const Verdict v = certify_sign(tu, parse_condition("pos"), budget(20000, 16, 6007 + n));
        const double want_max = (n + 1) * c_star / 2;
        const bool ok = tors <= 1e-10 && kahler <= 1e-8 && hmax - hmin <= 1e-8 &&
                        std::abs(v.best_min - c_star) <= 1e-6 && std::abs(v.best_max - want_max) <= 1e-6;
        o.pass = o.pass && ok;
        d << "n=" << n << ": torsion/eta " << tors << ", kahler-like " << kahler << ", HSC spread "
          << hmax - hmin << ", envelope [" << v.best_min << ", " << v.best_max << "] vs [" << c_star << ", "
          << want_max << "]; ";
    }
    o.detail = d.str();
    return o;
}

// 7 -------------------------------------------------------------------------
Outcome criterion7()
{
    struct Case {
        int n, i, j, k, l;
    };
    const Case cases[] = {{2, 0, 0, 1, 1}, {3, 0, 0, 1, 1}, {3, 0, 1, 1, 0}};
    Outcome o;
    Detail d;
    std::uint64_t seed = 7007;
    for (const Case& c : cases) {
        const MomentEstimate e = fs_moment(c.n, c.i, c.j, c.k, c.l, 1000000, seed++);
        const double exact = fs_moment_exact(c.n, c.i, c.j, c.k, c.l);
        const bool ok = within_band(e, exact);
        o.pass = o.pass && ok;
        d << "n=" << c.n << " (" << c.i + 1 << c.j + 1 << c.k + 1 << c.l + 1 << "): " << e.value.real() << " vs "
          << exact << " (" << std::abs(e.value - exact) / e.std_error << " se); ";
    }
    o.detail = d.str();
    return o;
}

// 8 -------------------------------------------------------------------------
Outcome criterion8()
{
    Rng rng(8008);
    int agree = 0;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const int n = 2 + k % 3;
        const ChernTensor t = random_pair_symmetric_tensor(n, rng);
        RealVector b(n);
        for (int i = 0; i < n; ++i)
            b(i) = rng.uniform();
        const BergerReport r = berger_check(t, b, 200000, 8100 + k);
        agree += r.agree;
        worst = std::max(worst, r.deviation_in_se);
    }
    bool gap = true;
    Detail d;
    for (int n : {2, 3}) {
        const ChernTensor tu = unitary_chern_tensor(jet(ex22(n), Point::Zero(n)));
        const RealVector b = RealVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
        const double pair = h_positive_pairsum(tu, b);
        const double bu = rbc_value(tu, b);
        gap = gap && pair > 0.0 && bu < 0.0;
        d << "example_2_2 n=" << n << ": pair-sum " << pair << ", B(uniform) " << bu << "; ";
    }
    return {agree == 20 && gap,
            (Detail() << agree << "/20 tensors agree (worst " << worst << " se); " << d.str()).str()};
}

// 9 -------------------------------------------------------------------------
Outcome criterion9()
{
    struct Triple {
        std::string label;
        MetricSpec g, h;
        MapSpec f;
        double radius;
    };
    const std::vector<Triple> triples = {
        {"flat(1) -> flat(1), z1^2", catalog("flat", {{"n", 1}}), catalog("flat", {{"n", 1}}),
         MapSpec("square", 1, 1, {"z1^2"}), 0.5},
        {"fs(2) -> dual(2), identity", catalog("fubini_study_affine", {{"n", 2}}),
         catalog("example_2_2_dual", {{"n", 2}, {"eps", 0.3}}), MapSpec::identity(2), 0.05},
        {"example_2_2 -> example_2_3, identity", ex22(2), catalog("example_2_3", {{"b", 1}}), MapSpec::identity(2),
         0.05},
        {"example_2_3 -> fs(3), (z1, z2, z1 z2)", catalog("example_2_3", {{"b", 1}}),
         catalog("fubini_study_affine", {{"n", 3}}), MapSpec("graph", 2, 3, {"z1", "z2", "z1*z2"}), 0.05},
        {"flat(2) -> example_2_2, polynomial", catalog("flat", {{"n", 2}}), ex22(2),
         MapSpec("poly", 2, 2, {"z1 + z2^2/2", "z2 - z1*z2/3"}), 0.05},
    };
    Outcome o;
    Detail d;
    std::uint64_t seed = 9009;
    for (const Triple& t : triples) {
        const auto pts = region_points(t.g.dim(), Region{t.radius, 50, false}, seed++);
        double worst = 0.0;
        int refined = 0;
        for (const Point& p : pts) {
            const BochnerResidual r = bochner_residual(t.g, t.h, t.f, p, 1e-3, 1e-4);
            worst = std::max(worst, r.residual);
            refined += r.richardson;
        }
        o.pass = o.pass && worst <= 1e-4;
        d << t.label << ": " << worst << (refined ? " (Richardson)" : "") << "; ";
    }
    o.detail = d.str();
    return o;
}

// 10 ------------------------------------------------------------------------
Outcome criterion10()
{
    Rng rng(10010);
    double cs = INFINITY;
    for (int k = 0; k < 1000; ++k) {
        const int m = 1 + k % 4;
        Matrix a(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                a(i, j) = rng.complex_normal();
        cs = std::min(cs, cauchy_schwarz_gap(a * a.adjoint()));
    }
    const MetricSpec ball = load_metric_file(std::string(RBC_SOURCE_DIR) + "/data/metrics/ball.json");
    const MapSpec maps[] = {MapSpec("half", 2, 2, {"z1/2", "z2/2"}),
                            MapSpec("poly", 2, 2, {"z1/2 + z2^2/4", "z2/2"}), MapSpec::identity(2)};
    const SchwarzBounds bounds{3.0, 0.0, 1.0};
    int certified = 0, verified = 0, rank_ok = 0;
    double worst = INFINITY;
    std::uint64_t seed = 10011;
    for (const MapSpec& f : maps) {
        const auto pts = region_points(2, Region{0.3, 10, false}, seed++);
        const SchwarzReport r = schwarz_inequality_report(ball, ball, f, pts, bounds, budget(5000, 8, seed++));
        for (const SchwarzPoint& p : r.points) {
            if (p.hyp_curvature_status == Status::Certified) {
                ++certified;
                rank_ok += p.rank_lhs <= p.rank_rhs + 1e-12;
            }
            if (p.hypotheses_verified) {
                ++verified;
                worst = std::min(worst, p.conclusion_residual);
                if (p.log_conclusion_residual)
                    worst = std::min(worst, *p.log_conclusion_residual);
            }
        }
    }
    const bool pass = cs >= -1e-12 && certified > 0 && rank_ok == certified && verified > 0 && worst >= -1e-4;
    return {pass, (Detail() << "min Cauchy-Schwarz gap " << cs << "; rank bound at " << rank_ok << "/" << certified
                            << " certified points; hypotheses verified at " << verified
                            << " points, min conclusion residual " << worst)
                      .str()};
}

// 11 ------------------------------------------------------------------------
Outcome criterion11()
{
    Rng rng(11011);
    std::vector<Point> calib;
    for (int k = 0; k < 5; ++k)
        calib.push_back(random_point(2, 0.2, rng));
    const double sigma = calibrate_torsion_factor(ex22(2), calib);
    double worst22 = 0.0;
    for (int k = 0; k < 20; ++k)
        worst22 = std::max(worst22, torsion_identity_residual(ex22(2), random_point(2, 0.2, rng), sigma));
    double worst_kahler = 0.0;
    for (const auto& e : catalog_entries()) {
        const MetricSpec s = catalog(e.name, with_example_params(e, {}));
        if (symmetry_report(unitary_chern_tensor(jet(s, Point::Zero(s.dim())))).kahler_like > 1e-8)
            continue;
        if (torsion_eta(jet(s, Point::Constant(s.dim(), cplx(0.05, 0.02)))).torsion_norm() > 1e-12)
            continue;
        for (int k = 0; k < 20; ++k)
            worst_kahler = std::max(worst_kahler, torsion_identity_residual(s, random_point(s.dim(), 0.5, rng), sigma));
    }
    const bool pass = sigma == kTorsionFactor && worst22 <= 1e-8 && worst_kahler <= 1e-10;
    return {pass, (Detail() << "sigma = " << sigma << ", example_2_2 max residual " << worst22
                            << ", Kähler metrics max residual " << worst_kahler)
                      .str()};
}

// 12 ------------------------------------------------------------------------
Outcome criterion12()
{
    const ConstantRbcReport flat = constant_rbc_check(catalog("flat", {{"n", 3}}), Point::Constant(3, 0.1), 0.0);
    const ConstantRbcReport ex23 = constant_rbc_check(catalog("example_2_3", {{"b", 1}}), Point::Zero(2), 0.0);
    Rng rng(12012);
    int failing = 0, misreported = 0;
    for (const auto& e : catalog_entries()) {
        const MetricSpec s = catalog(e.name, with_example_params(e, {}));
        for (double c : {-1.0, 0.0, 1.0, 2.0}) {
            const ConstantRbcReport r = constant_rbc_check(s, random_point(s.dim(), 0.1, rng), c);
            if (r.pattern_residual > r.tolerance) {
                ++failing;
                misreported += r.consistent;
            }
        }
    }
    const bool pass = flat.consistent && flat.pattern_residual <= 1e-12 && std::abs(flat.eta_trace) <= 1e-12 &&
                      !ex23.consistent && ex23.pattern_residual >= 0.1 && misreported == 0;
    return {pass, (Detail() << "flat residual " << flat.pattern_residual << " (eta trace " << flat.eta_trace
                            << "), example_2_3 residual " << ex23.pattern_residual << ", " << misreported
                            << " of " << failing << " failing patterns reported constant")
                      .str()};
}

// 13 ------------------------------------------------------------------------
Outcome criterion13()
{
    const std::vector<std::vector<std::string>> invocations = {
        {"--seed", "3", "eval", "example_2_3", "--point", "0.05,0.02i", "--directions", "20"},
        {"--seed", "3", "--samples", "5000", "certify", "example_2_3", "--radius", "0.05", "--points", "4"},
        {"--seed", "3", "--samples", "2000", "schwarz", "fs", "dual", "identity", "--radius", "0.05", "--points",
         "3", "--sup"},
        {"--seed", "3", "--samples", "20000", "mc", "fs-moment", "--n", "3", "--idx", "1,2,2,1"},
        {"--seed", "3", "--samples", "20000", "mc", "berger", "--metric", "example_2_2"},
        {"catalog", "show", "example_2_2"},
    };
    int identical = 0;
    for (const auto& args : invocations) {
        std::ostringstream a, b, ea, eb;
        const int ca = run_cli(args, a, ea);
        const int cb = run_cli(args, b, eb);
        identical += ca == cb && ca == 0 && a.str() == b.str() && !a.str().empty();
    }
    const int total = static_cast<int>(invocations.size());
    return {identical == total, (Detail() << identical << "/" << total << " invocations byte-identical").str()};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"example_2_2 curvature components at the origin", criterion1},
        {"example_2_2 holomorphic sectional curvature 1 - eps", criterion2},
        {"example_2_2 real bisectional witness", criterion3},
        {"dual metric: H < 0 but B not <= 0", criterion4},
        {"example_2_3 quadratic form, Ricci entries, positivity evidence", criterion5},
        {"Fubini-Study Kähler sanity and certifier envelope", criterion6},
        {"sphere moment identity", criterion7},
        {"Berger averaging and the pair-sum gap", criterion8},
        {"Bochner identity on five triples", criterion9},
        {"Schwarz inequality machinery", criterion10},
        {"torsion identity calibration", criterion11},
        {"constant real bisectional curvature checker", criterion12},
        {"report determinism", criterion13},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s  %2zu  %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                    o.detail.c_str(), s);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
