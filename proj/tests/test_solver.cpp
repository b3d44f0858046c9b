#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "sppde/solver.hpp"

using namespace sppde;

TEST_CASE("tridiagonal solve: identity and 2x2 exact cases")
{
    const std::vector<double> id_lower{0, 0, 0}, id_diag{1, 1, 1}, id_upper{0, 0, 0};
    const std::vector<double> rhs{3.0, -1.5, 7.0};
    CHECK(solve_tridiagonal(id_lower, id_diag, id_upper, rhs) == rhs);

    // [[2,1],[1,2]] x = (3,3) -> x = (1,1)
    const std::vector<double> lo{0, 1}, di{2, 2}, up{1, 0}, b{3, 3};
    const auto x = solve_tridiagonal(lo, di, up, b);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tridiagonal solve matches the dense oracle on random systems")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const size_t n = 50;
        std::vector<double> lo(n), di(n), up(n), rhs(n);
        std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
        for (size_t i = 0; i < n; ++i) {
            lo[i] = i == 0 ? 0.0 : unif(rng);
            up[i] = i == n - 1 ? 0.0 : unif(rng);
            di[i] = 3.0 + unif(rng); // diagonally dominant
            rhs[i] = unif(rng);
            if (i > 0)
                dense[i][i - 1] = lo[i];
            dense[i][i] = di[i];
            if (i < n - 1)
                dense[i][i + 1] = up[i];
        }
        const auto x = solve_tridiagonal(lo, di, up, rhs);
        const auto y = test::dense_solve(dense, rhs);
        double scale = 0.0;
        for (double v : y)
            scale = std::max(scale, std::abs(v));
        for (size_t i = 0; i < n; ++i)
            CHECK(std::abs(x[i] - y[i]) <= 1e-12 * scale);

        // residual bound
        double residual = 0.0, anorm = 0.0, xnorm = 0.0, bnorm = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double r = di[i] * x[i] - rhs[i];
            if (i > 0)
                r += lo[i] * x[i - 1];
            if (i < n - 1)
                r += up[i] * x[i + 1];
            residual = std::max(residual, std::abs(r));
            anorm = std::max(anorm, std::abs(lo[i]) + std::abs(di[i]) + std::abs(up[i]));
            xnorm = std::max(xnorm, std::abs(x[i]));
            bnorm = std::max(bnorm, std::abs(rhs[i]));
        }
        CHECK(residual <= 1e-10 * (anorm * xnorm + bnorm));
    }
}

TEST_CASE("tridiagonal solve reports pivot breakdown")
{
    const std::vector<double> lo{0, 0}, di{0, 1}, up{0, 0}, rhs{1, 1};
    CHECK_THROWS_AS(solve_tridiagonal(lo, di, up, rhs), NumericalError);
    CHECK_THROWS_AS(solve_tridiagonal({}, {}, {}, {}), DomainError);
}

namespace {

MmsCase quadratic_mms(double eps, double mu)
{
    // spatially quadratic and temporally linear: reproduced exactly by the
    // scheme on a uniform mesh, up to roundoff
    ProblemSpec skeleton = builtin_example("example1");
    skeleton.name = "mms-quadratic";
    skeleton.eps = eps;
    skeleton.mu = mu;
    ManufacturedSolution ms;
    ms.u = [](double x, double t) { return x * (1.0 - x) * t; };
    ms.u_x = [](double x, double t) { return (1.0 - 2.0 * x) * t; };
    ms.u_xx = [](double, double t) { return -2.0 * t; };
    ms.u_t = [](double x, double) { return x * (1.0 - x); };
    return {mms_problem(ms, skeleton), ms.u};
}

} // namespace

TEST_CASE("quadratic-in-space, linear-in-time data is reproduced to roundoff")
{
    const MmsCase mms = quadratic_mms(std::ldexp(1.0, -6), std::ldexp(1.0, -16));
    const SolutionField field = solve(mms.spec, 32, 32);
    double err = 0.0;
    for (int j = 0; j <= field.grid.m(); ++j)
        for (int i = 0; i <= field.mesh.n; ++i)
            err = std::max(err, std::abs(field.u(i, j) -
                                         mms.u_exact(field.mesh.nodes[static_cast<size_t>(i)],
                                                     field.grid.levels[static_cast<size_t>(j)])));
    CHECK(err < 1e-11);
}

TEST_CASE("one step from exact data matches the dense oracle")
{
    ProblemSpec s = builtin_example("example1");
    const Regime regime = classify_regime(s);
    const int n = 16;
    const auto tau = compute_transition_points(s, compute_thetas(s, regime), n);
    const auto mesh = build_spatial_mesh(s, tau, n);
    const auto grid = build_time_grid(s.T, 8);
    const auto norms = estimate_coeff_norms(s, mesh.nodes, grid.levels);
    const auto sel = select_operators(s, mesh, regime, grid.dt, norms);

    std::vector<double> uprev(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        uprev[static_cast<size_t>(i)] = 0.1 * std::sin(2.0 * i);
    uprev.front() = 0.0;
    uprev.back() = 0.0;

    const auto level =
        step(s, mesh, sel, grid.levels[0], grid.levels[1], grid.dt, uprev);
    const auto dense = test::dense_step_oracle(s, mesh, sel.tags, grid.levels[0],
                                               grid.levels[1], grid.dt, uprev);
    std::vector<double> neg_rhs = dense.rhs;
    std::vector<std::vector<double>> neg_a = dense.a;
    for (auto& row : neg_a)
        for (auto& v : row)
            v = -v;
    for (auto& v : neg_rhs)
        v = -v;
    const auto x = test::dense_solve(neg_a, neg_rhs);
    for (int i = 1; i < n; ++i)
        CHECK(level[static_cast<size_t>(i)] ==
              doctest::Approx(x[static_cast<size_t>(i) - 1]).epsilon(1e-12));
    CHECK(level.front() == 0.0);
    CHECK(level.back() == 0.0);
}

TEST_CASE("one step on the N=8 constant-coefficient toy matches the dense oracle")
{
    ProblemSpec s;
    s.a = PiecewiseCoefficient([](double, double) { return -1.0; },
                               [](double, double) { return 1.0; });
    s.b = PiecewiseCoefficient::continuous([](double, double) { return 1.5; });
    s.f = PiecewiseCoefficient::continuous([](double, double) { return 0.7; });
    s.p = [](double) { return 0.0; };
    s.r = [](double) { return 0.0; };
    s.q = [](double) { return 0.0; };
    s.eps = 0.25;
    s.mu = 0.5;
    const auto mesh = build_spatial_mesh(s, {0.125, 0.125, 0.125, 0.125}, 8);
    const auto norms = estimate_coeff_norms(s, mesh.nodes, {0.0, 1.0});
    const auto sel = select_operators(s, mesh, classify_regime(s), 0.5, norms);

    std::vector<double> uprev(9, 0.0);
    for (int i = 1; i < 8; ++i)
        uprev[static_cast<size_t>(i)] = 0.05 * i * (8 - i);

    const auto level = step(s, mesh, sel, 0.0, 0.5, 0.5, uprev);
    const auto dense = test::dense_step_oracle(s, mesh, sel.tags, 0.0, 0.5, 0.5, uprev);
    std::vector<std::vector<double>> neg_a = dense.a;
    std::vector<double> neg_rhs = dense.rhs;
    for (auto& row : neg_a)
        for (auto& v : row)
            v = -v;
    for (auto& v : neg_rhs)
        v = -v;
    const auto x = test::dense_solve(neg_a, neg_rhs);
    for (int i = 1; i < 8; ++i)
        CHECK(level[static_cast<size_t>(i)] ==
              doctest::Approx(x[static_cast<size_t>(i) - 1]).epsilon(1e-12));
}

TEST_CASE("smooth manufactured solve at N=M=256 is accurate below 1e-3")
{
    const MmsCase mms = builtin_mms("mms-smooth");
    const SolutionField field = solve(mms.spec, 256, 256);
    double err = 0.0;
    for (int j = 0; j <= field.grid.m(); ++j)
        for (int i = 0; i <= field.mesh.n; ++i)
            err = std::max(err, std::abs(field.u(i, j) -
                                         mms.u_exact(field.mesh.nodes[static_cast<size_t>(i)],
                                                     field.grid.levels[static_cast<size_t>(j)])));
    CHECK(err < 1e-3);
}

TEST_CASE("zero data marches to zero")
{
    ProblemSpec s = builtin_example("example1");
    s.f = PiecewiseCoefficient::continuous([](double, double) { return 0.0; });
    const SolutionField field = solve(s, 16, 4);
    for (double v : field.data)
        CHECK(v == 0.0);
}

TEST_CASE("example1 solve is finite and traces its data")
{
    const ProblemSpec s = builtin_example("example1");
    const SolutionField field = solve(s, 32, 32);
    for (double v : field.data)
        CHECK(std::isfinite(v));
    for (int j = 0; j <= field.grid.m(); ++j) {
        CHECK(field.u(0, j) == 0.0);
        CHECK(field.u(field.mesh.n, j) == 0.0);
    }
    for (int i = 0; i <= field.mesh.n; ++i)
        CHECK(field.u(i, 0) == 0.0);
    CHECK(field.max_abs > 0.0);
}

TEST_CASE("manufactured traces are installed exactly")
{
    const MmsCase mms = builtin_mms("mms-layer");
    const SolutionField field = solve(mms.spec, 32, 8);
    for (int j = 0; j <= field.grid.m(); ++j) {
        const double t = field.grid.levels[static_cast<size_t>(j)];
        CHECK(field.u(0, j) == mms.spec.p(t));
        CHECK(field.u(field.mesh.n, j) == mms.spec.r(t));
    }
}

TEST_CASE("solves are bitwise deterministic")
{
    const ProblemSpec s = builtin_example("example2");
    const SolutionField a = solve(s, 32, 16);
    const SolutionField b = solve(s, 32, 16);
    REQUIRE(a.data.size() == b.data.size());
    CHECK(std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(double)) == 0);
}

TEST_CASE("stability bound holds on the built-in examples")
{
    for (const char* name : {"example1", "example2", "example3"}) {
        const SolutionField field = solve(builtin_example(name), 32, 32);
        CHECK(field.stability_ok);
        CHECK(field.max_abs <= field.stability_bound);
    }
}

TEST_CASE("larger source means smaller solution (discrete comparison)")
{
    // parameters inside the monotone envelope so both audits pass
    auto make = [](double shift) {
        ProblemSpec s;
        s.a = PiecewiseCoefficient([](double x, double) { return -(1.0 + 0.2 * x); },
                                   [](double x, double) { return 1.0 + 0.2 * x; });
        s.b = PiecewiseCoefficient::continuous([](double, double t) { return 2.0 + 0.5 * t; });
        s.f = PiecewiseCoefficient::continuous(
            [shift](double x, double t) { return std::sin(3.0 * x) * (1.0 - t) - shift; });
        s.p = [](double) { return 0.0; };
        s.r = [](double) { return 0.0; };
        s.q = [](double) { return 0.0; };
        s.eps = 0.25;
        s.mu = 0.75;
        s.alpha1 = 1.0;
        s.alpha2 = 1.1;
        s.beta = 2.0;
        s.rho = 1.0;
        return s;
    };
    const SolutionField ua = solve(make(0.0), 32, 2);
    const SolutionField ub = solve(make(0.5), 32, 2); // f_B <= f_A pointwise
    CHECK(ua.total_sign_failures() == 0);
    CHECK(ub.total_sign_failures() == 0);
    for (size_t k = 0; k < ua.data.size(); ++k)
        CHECK(ub.data[k] >= ua.data[k] - 1e-10);
}

TEST_CASE("temporal refinement quarters the one-step error")
{
    // u with genuine curvature in t; the spatial part is quadratic so the
    // remaining error is the Crank-Nicolson term
    ProblemSpec skeleton = builtin_example("example1");
    ManufacturedSolution ms;
    ms.u = [](double x, double t) { return x * (1.0 - x) * (1.0 - std::exp(-t)); };
    ms.u_x = [](double x, double t) { return (1.0 - 2.0 * x) * (1.0 - std::exp(-t)); };
    ms.u_xx = [](double, double t) { return -2.0 * (1.0 - std::exp(-t)); };
    ms.u_t = [](double x, double t) { return x * (1.0 - x) * std::exp(-t); };
    const ProblemSpec spec = mms_problem(ms, skeleton);

    auto one_step_error = [&](int m) {
        const Regime regime = classify_regime(spec);
        const auto tau = compute_transition_points(spec, compute_thetas(spec, regime), 64);
        const auto mesh = build_spatial_mesh(spec, tau, 64);
        const auto grid = build_time_grid(spec.T, m);
        const auto norms = estimate_coeff_norms(spec, mesh.nodes, grid.levels);
        const auto sel = select_operators(spec, mesh, regime, grid.dt, norms);
        std::vector<double> u0(65);
        for (int i = 0; i <= 64; ++i)
            u0[static_cast<size_t>(i)] = spec.q(mesh.nodes[static_cast<size_t>(i)]);
        const auto level = step(spec, mesh, sel, grid.levels[0], grid.levels[1], grid.dt, u0);
        double err = 0.0;
        for (int i = 0; i <= 64; ++i)
            err = std::max(err, std::abs(level[static_cast<size_t>(i)] -
                                         ms.u(mesh.nodes[static_cast<size_t>(i)],
                                              grid.levels[1])));
        return err;
    };

    const double e8 = one_step_error(8);
    const double e16 = one_step_error(16);
    const double ratio = e8 / e16;
    // one-step errors scale like dt^3: halving dt gives a ratio near 8
    CHECK(ratio > 5.0);
    CHECK(ratio < 11.0);
}
