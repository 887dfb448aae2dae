#include <doctest.h>

#include <rbc/errors.hpp>
#include <rbc/schwarz.hpp>

using namespace rbc;

namespace {

Point pt(cplx a, cplx b)
{
    Point p(2);
    p << a, b;
    return p;
}

MetricSpec example(const std::string& name)
{
    return catalog(name, with_example_params(catalog_entry(name), {}));
}

MetricSpec scaled(const MetricSpec& s, double c)
{
    nlohmann::json j = metric_to_json(s);
    for (auto& row : j["entries_upper"])
        for (auto& e : row)
            e = std::to_string(c) + "*(" + e.get<std::string>() + ")";
    return metric_from_json(j);
}

MetricSpec ball()
{
    return load_metric_file(std::string(RBC_SOURCE_DIR) + "/data/metrics/ball.json");
}

} // namespace

TEST_CASE("maps parse, differentiate and evaluate")
{
    const MapSpec f("m", 2, 3, {"z1", "z2", "z1*z2"});
    const Point p = pt({0.1, 0.2}, {-0.3, 0.05});
    const MapJet j = map_jet(f, p);
    CHECK(std::abs(j.fp(2) - p(0) * p(1)) < 1e-15);
    CHECK(std::abs(j.df(2, 0) - p(1)) < 1e-15);
    CHECK(std::abs(j.df(2, 1) - p(0)) < 1e-15);
    CHECK(std::abs(j.d2f[2](0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(j.d2f[2](0, 0)) == 0.0);
    CHECK_THROWS_AS(MapSpec("bad", 1, 1, {"zb1"}), InputError);
    CHECK_THROWS_AS(MapSpec("bad", 1, 2, {"z1"}), InputError);
    CHECK_THROWS_AS(map_from_json(nlohmann::json::parse(R"({"domain_dim": 1})")), InputError);
}

TEST_CASE("identity between equal metrics gives u = dimension")
{
    const MetricSpec g = example("example_2_3");
    const Point p = pt({0.05, 0.02}, {-0.03, 0.04});
    const MapSpec id = MapSpec::identity(2);
    CHECK(trace_u(jet(g, p), jet(g, p), map_jet(id, p)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("u scales with the target metric and inversely with the domain metric")
{
    const MetricSpec g = example("example_2_3");
    const MetricSpec h = example("fubini_study_affine");
    const MapSpec f("poly", 2, 2, {"z1 + z2^2", "z2 - z1*z2"});
    const Point p = pt({0.05, 0.01}, {0.02, -0.04});
    const MapJet mj = map_jet(f, p);
    const double u = trace_u(jet(g, p), jet(h, mj.fp), mj);
    CHECK(trace_u(jet(g, p), jet(scaled(h, 3.0), mj.fp), mj) == doctest::Approx(3.0 * u).epsilon(1e-12));
    CHECK(trace_u(jet(scaled(g, 4.0), p), jet(h, mj.fp), mj) == doctest::Approx(u / 4.0).epsilon(1e-12));
}

TEST_CASE("rank is that of the differential")
{
    const MetricSpec g = example("example_2_3");
    const MetricSpec h = catalog("fubini_study_affine", {{"n", 3}});
    const Point p = pt({0.05, 0.01}, {0.02, -0.04});
    const MapSpec full("full", 2, 3, {"z1", "z2", "z1*z2"});
    const MapSpec degenerate("line", 2, 3, {"z1 + z2", "2*(z1 + z2)", "0"});
    const MapSpec constant("const", 2, 3, {"0.1", "0", "0"});
    for (const MapSpec* f : {&full, &degenerate, &constant}) {
        const MapJet mj = map_jet(*f, p);
        const Eigen::Index direct = Eigen::FullPivLU<Matrix>(mj.df).rank();
        CHECK(numerical_rank(jet(g, p), jet(h, mj.fp), mj) == direct);
    }
}

TEST_CASE("Cauchy-Schwarz gap is nonnegative")
{
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + trial % 4;
        Matrix a(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                a(i, j) = rng.complex_normal();
        CHECK(cauchy_schwarz_gap(a * a.adjoint()) >= -1e-12);
    }
    CHECK(std::abs(cauchy_schwarz_gap(Matrix::Identity(3, 3))) < 1e-15);
}

TEST_CASE("Bochner identity holds against finite differences")
{
    struct Triple {
        MetricSpec g, h;
        MapSpec f;
    };
    const Triple triples[] = {
        {catalog("flat", {{"n", 1}}), catalog("flat", {{"n", 1}}), MapSpec("sq", 1, 1, {"z1^2"})},
        {catalog("fubini_study_affine", {{"n", 2}}), example("example_2_2_dual"), MapSpec::identity(2)},
        {example("example_2_2"), example("example_2_3"), MapSpec::identity(2)},
        {ball(), ball(), MapSpec("half", 2, 2, {"z1/2", "z2/2"})},
    };
    Rng rng(41);
    for (const Triple& t : triples) {
        for (int trial = 0; trial < 5; ++trial) {
            Point p(t.g.dim());
            for (int i = 0; i < t.g.dim(); ++i)
                p(i) = rng.complex_normal();
            p *= 0.05 * rng.uniform() / p.norm();
            const BochnerResidual r = bochner_residual(t.g, t.h, t.f, p);
            CAPTURE(t.g.name());
            CHECK(r.residual <= 1e-4);
        }
    }
}

TEST_CASE("flat to flat by a linear map has harmonic u")
{
    const MetricSpec flat = catalog("flat", {{"n", 2}});
    const MapSpec f("lin", 2, 2, {"2*z1 + z2", "i*z2"});
    const BochnerTerms t = bochner_terms(flat, flat, f, pt({0.3, 0}, {0, 0.1}));
    CHECK(t.u == doctest::Approx(6.0));
    CHECK(t.nabla_norm2 == 0.0);
    CHECK(t.ricci_term == 0.0);
    CHECK(t.curvature_term == 0.0);
    CHECK(std::abs(box_u_fd(flat, flat, f, pt({0.3, 0}, {0, 0.1}), 1e-3)) < 1e-6);
}

TEST_CASE("Kato inequality")
{
    const MetricSpec g = example("example_2_3");
    const MetricSpec h = catalog("fubini_study_affine", {{"n", 2}});
    const MapSpec f("poly", 2, 2, {"z1 + z2^2", "z2 - z1*z2"});
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Point p(2);
        p << rng.complex_normal(), rng.complex_normal();
        p *= 0.1 * rng.uniform() / p.norm();
        const KatoReport k = kato_check(g, h, f, p);
        CHECK(!k.critical);
        CHECK(k.gap >= -1e-6);
        // box log u = box u / u - |du|^2 / u^2, so the lemma residual is the Kato gap over u.
        CHECK(std::abs(k.lemma_residual - k.gap / k.u) <= 1e-4 * (1.0 + std::abs(k.lemma_rhs)));
        CHECK(k.lemma_residual >= -1e-4);
    }
    const MapSpec constant("const", 2, 2, {"0.1", "0"});
    CHECK(kato_check(g, h, constant, Point::Zero(2)).critical);
}

TEST_CASE("Schwarz report on the ball verifies hypotheses and conclusions")
{
    const MetricSpec b = ball();
    const MapSpec f("half", 2, 2, {"z1/2", "z2/2"});
    const auto pts = region_points(2, Region{0.3, 5, false}, 3);
    Budget budget;
    budget.samples = 2000;
    budget.starts = 4;
    const SchwarzReport r = schwarz_inequality_report(b, b, f, pts, SchwarzBounds{3.0, 0.0, 1.0}, budget);
    CHECK(r.verified_points == 5);
    CHECK(r.rank == 2);
    CHECK(r.worst_conclusion >= -1e-4);
    for (const SchwarzPoint& p : r.points) {
        CHECK(p.hyp_curvature_status == Status::Certified);
        CHECK(p.rank_lhs <= p.rank_rhs + 1e-12);
        CHECK(p.rank_vs_direct < 1e-10);
        CHECK(p.cauchy_schwarz_gap >= -1e-12);
    }
    const SupBoundReport s = sup_bound_check(b, b, f, pts, SchwarzBounds{3.0, 0.0, 1.0});
    CHECK(s.classification == "consistent");
    REQUIRE(s.rank_bound.has_value());
    CHECK(*s.rank_bound == doctest::Approx(6.0));
}

TEST_CASE("constant maps skip the log conclusion")
{
    const MetricSpec g = catalog("flat", {{"n", 2}});
    const MapSpec constant("const", 2, 2, {"0.1", "0"});
    Budget budget;
    budget.samples = 500;
    budget.starts = 2;
    const SchwarzReport r = schwarz_inequality_report(g, g, constant, {Point::Zero(2)}, SchwarzBounds{}, budget);
    CHECK(r.verified_points == 1);
    CHECK(!r.notices.empty());
    CHECK(r.rank == 0);
    CHECK(!r.points[0].log_conclusion_residual.has_value());
}

TEST_CASE("unverified hypotheses produce no conclusion")
{
    // B <= -1 fails on a flat target.
    const MetricSpec g = catalog("flat", {{"n", 2}});
    Budget budget;
    budget.samples = 500;
    budget.starts = 2;
    SchwarzBounds bounds;
    bounds.kappa = 1.0;
    const SchwarzReport r =
        schwarz_inequality_report(g, g, MapSpec::identity(2), {Point::Zero(2)}, bounds, budget);
    CHECK(r.verified_points == 0);
    CHECK(!r.points[0].hypotheses_verified);
    CHECK(!r.points[0].hyp_curvature);
    CHECK(!r.notices.empty());
}

TEST_CASE("step and dimension checks")
{
    const MetricSpec g = catalog("flat", {{"n", 2}});
    CHECK_THROWS_AS(box_u_fd(g, g, MapSpec::identity(2), Point::Zero(2), 0.1), InputError);
    CHECK_THROWS_AS(bochner_terms(g, catalog("flat", {{"n", 3}}), MapSpec::identity(2), Point::Zero(2)),
                    InputError);
}

TEST_CASE("map jets of a quadratic map")
{
    const MapSpec f("quad", 2, 2, {"z1^2", "z1*z2"});
    const MapJet mj = map_jet(f, pt(1.0, 2.0));
    Matrix expected(2, 2);
    expected << 2.0, 0.0, 2.0, 1.0;
    CHECK((mj.df - expected).norm() < 1e-15);
    CHECK(std::abs(mj.fp(0) - 1.0) < 1e-15);
    CHECK(std::abs(mj.fp(1) - 2.0) < 1e-15);
}

TEST_CASE("halving map between flat spaces")
{
    for (int n : {1, 2, 3}) {
        const MetricSpec g = catalog("flat", {{"n", n}});
        std::vector<std::string> comps;
        for (int i = 1; i <= n; ++i)
            comps.push_back("z" + std::to_string(i) + "/2");
        const MapSpec f("half", n, n, comps);
        const Point p = Point::Constant(n, cplx(0.1, -0.2));
        const MapJet mj = map_jet(f, p);
        CHECK(trace_u(jet(g, p), jet(g, mj.fp), mj) == doctest::Approx(n / 4.0).epsilon(1e-14));
    }
}

TEST_CASE("second fundamental form of a flat quadratic map")
{
    const MetricSpec g = catalog("flat", {{"n", 2}});
    const MapSpec f("sq", 2, 2, {"z1^2", "z2"});
    const Point p = pt(1.0, 0.0);
    const MapJet mj = map_jet(f, p);
    CHECK(nabla_df(jet(g, p), jet(g, mj.fp), mj).norm2 == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("box u of the squaring map")
{
    Point p(1);
    p << cplx(0.3, -0.2);
    const MetricSpec g = catalog("flat", {{"n", 1}});
    const MapSpec f("sq", 1, 1, {"z1^2"});
    CHECK(std::abs(box_u_fd(g, g, f, p, 1e-3) - 4.0) < 1e-6);
}
