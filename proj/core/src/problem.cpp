#include "sppde/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace sppde {

PiecewiseCoefficient::PiecewiseCoefficient(ScalarField left, ScalarField right)
    : left_(std::move(left)), right_(std::move(right))
{
}

PiecewiseCoefficient PiecewiseCoefficient::continuous(ScalarField w)
{
    return PiecewiseCoefficient(w, w);
}

double PiecewiseCoefficient::at(double x, double t, double d) const
{
    if (x == d)
        throw DomainError("coefficient evaluated at the discontinuity x = d; "
                          "request the left or right limit explicitly");
    return x < d ? left_(x, t) : right_(x, t);
}

double ProblemSpec::stability_rate() const
{
    return std::min(alpha1 / d, alpha2 / (1.0 - d));
}

namespace {

std::vector<double> uniform_samples(double lo, double hi, int intervals)
{
    std::vector<double> xs(static_cast<size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i)
        xs[static_cast<size_t>(i)] = lo + (hi - lo) * i / intervals;
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

double sup_abs_on(const PiecewiseCoefficient& w, double d, double T, int nx, int nt)
{
    const auto ts = uniform_samples(0.0, T, nt);
    const auto xl = uniform_samples(0.0, d, nx);
    const auto xr = uniform_samples(d, 1.0, nx);
    double m = 0.0;
    for (double t : ts) {
        for (double x : xl)
            m = std::max(m, std::abs(w.left(x, t)));
        for (double x : xr)
            m = std::max(m, std::abs(w.right(x, t)));
    }
    return m;
}

} // namespace

double sampled_sup(const PiecewiseCoefficient& w, double d, double T)
{
    // base grid plus a 4x refinement
    return std::max(sup_abs_on(w, d, T, 128, 64), sup_abs_on(w, d, T, 512, 256));
}

double default_rho(double beta, const PiecewiseCoefficient& a, double d, double T)
{
    const double a_sup = sampled_sup(a, d, T);
    return std::min(1.0, beta / a_sup);
}

CoeffNorms estimate_coeff_norms(const ProblemSpec& spec,
                                const std::vector<double>& nodes,
                                const std::vector<double>& levels)
{
    CoeffNorms norms;
    norms.a = sampled_sup(spec.a, spec.d, spec.T);
    norms.b = sampled_sup(spec.b, spec.d, spec.T);

    // also sample on the actual grid; time levels strided to at most 65
    const size_t stride = std::max<size_t>(1, levels.size() / 64);
    for (size_t jt = 0; jt < levels.size(); jt += stride) {
        const double t = levels[jt];
        for (double x : nodes) {
            if (x < spec.d) {
                norms.a = std::max(norms.a, std::abs(spec.a.left(x, t)));
                norms.b = std::max(norms.b, std::abs(spec.b.left(x, t)));
            } else if (x > spec.d) {
                norms.a = std::max(norms.a, std::abs(spec.a.right(x, t)));
                norms.b = std::max(norms.b, std::abs(spec.b.right(x, t)));
            } else {
                norms.a = std::max({norms.a, std::abs(spec.a.left(x, t)),
                                    std::abs(spec.a.right(x, t))});
                norms.b = std::max({norms.b, std::abs(spec.b.left(x, t)),
                                    std::abs(spec.b.right(x, t))});
            }
        }
    }
    return norms;
}

void ProblemSpec::validate() const
{
    if (!a.valid() || !b.valid() || !f.valid() || !p || !r || !q)
        throw DomainError("problem data incomplete: coefficient or trace missing");
    if (!(eps > 0.0 && eps <= 1.0))
        throw DomainError("eps must lie in (0, 1]");
    if (!(mu > 0.0 && mu <= 1.0))
        throw DomainError("mu must lie in (0, 1]");
    if (!(d > 0.0 && d < 1.0))
        throw DomainError("d must lie in (0, 1)");
    if (!(T > 0.0))
        throw DomainError("T must be positive");
    if (!(alpha1 > 0.0 && alpha2 > 0.0))
        throw DomainError("alpha1 and alpha2 must be positive");
    if (!(beta > 0.0))
        throw DomainError("beta must be positive");
    if (!(rho > 0.0))
        throw DomainError("rho must be positive");

    // sampled sign conditions on a ~101 x 101 grid (51 x-samples per side)
    const double tol = 1e-12;
    const auto ts = uniform_samples(0.0, T, 100);
    const auto xl = uniform_samples(0.0, d, 50);
    const auto xr = uniform_samples(d, 1.0, 50);
    for (double t : ts) {
        for (double x : xl) {
            if (a.left(x, t) > -alpha1 + tol)
                throw DomainError("sign condition violated: a > -alpha1 left of d");
            if (b.left(x, t) < beta - tol)
                throw DomainError("sign condition violated: b < beta");
        }
        for (double x : xr) {
            if (a.right(x, t) < alpha2 - tol)
                throw DomainError("sign condition violated: a < alpha2 right of d");
            if (b.right(x, t) < beta - tol)
                throw DomainError("sign condition violated: b < beta");
        }
    }

    if (std::abs(q(0.0) - p(0.0)) > 1e-12 || std::abs(q(1.0) - r(0.0)) > 1e-12)
        throw DomainError("corner compatibility violated: q(0) != p(0) or q(1) != r(0)");
}

Regime classify_regime(const ProblemSpec& spec)
{
    // ties on equality take the eps-dominant branch
    return std::sqrt(spec.alpha()) * spec.mu <= std::sqrt(spec.rho * spec.eps)
               ? Regime::EpsDominant
               : Regime::MuDominant;
}

namespace {

ScalarFn zero_trace()
{
    return [](double) { return 0.0; };
}

ProblemSpec convection_reaction_skeleton()
{
    // a = -(1 + x(1-x)) / (1 + x(1-x)), b = 1 + exp(x); shared by example1,
    // example2 and the manufactured problems
    ProblemSpec s;
    s.a = PiecewiseCoefficient([](double x, double) { return -(1.0 + x * (1.0 - x)); },
                               [](double x, double) { return 1.0 + x * (1.0 - x); });
    s.b = PiecewiseCoefficient::continuous([](double x, double) { return 1.0 + std::exp(x); });
    s.p = zero_trace();
    s.r = zero_trace();
    s.q = zero_trace();
    s.d = 0.5;
    s.T = 1.0;
    s.alpha1 = 1.0;
    s.alpha2 = 1.0;
    s.beta = 2.0;
    s.rho = default_rho(s.beta, s.a, s.d, s.T);
    return s;
}

ProblemSpec make_example1()
{
    ProblemSpec s = convection_reaction_skeleton();
    s.name = "example1";
    s.eps = std::ldexp(1.0, -6);
    s.mu = std::ldexp(1.0, -16);
    s.f = PiecewiseCoefficient([](double x, double t) { return -2.0 * (1.0 + x * x) * t; },
                               [](double x, double t) { return 2.0 * (1.0 + x * x) * t; });
    return s;
}

ProblemSpec make_example2()
{
    ProblemSpec s = convection_reaction_skeleton();
    s.name = "example2";
    s.eps = std::ldexp(1.0, -6);
    s.mu = std::ldexp(1.0, -16);
    s.f = PiecewiseCoefficient([](double x, double t) { return -2.0 * (1.0 + x * x) * t; },
                               [](double x, double t) { return 3.0 * (1.0 + x * x) * t; });
    return s;
}

ProblemSpec make_example3()
{
    ProblemSpec s;
    s.name = "example3";
    s.a = PiecewiseCoefficient([](double x, double t) { return -(1.0 + std::exp(-x * t)); },
                               [](double x, double t) { return 2.0 + x + t; });
    s.b = PiecewiseCoefficient::continuous([](double x, double t) { return 2.0 + x * t; });
    s.f = PiecewiseCoefficient(
        [](double x, double t) { return (std::exp(t * t) - 1.0) * (1.0 + x * t); },
        [](double x, double t) { return -(2.0 + x) * t * t; });
    s.p = zero_trace();
    s.r = zero_trace();
    s.q = zero_trace();
    s.eps = std::ldexp(1.0, -8);
    s.mu = std::ldexp(1.0, -16);
    s.d = 0.5;
    s.T = 1.0;
    s.alpha1 = 1.0 + std::exp(-0.5);
    s.alpha2 = 2.5;
    s.beta = 2.0;
    s.rho = default_rho(s.beta, s.a, s.d, s.T);
    return s;
}

MmsCase make_mms_smooth(double eps, double mu)
{
    ProblemSpec skeleton = convection_reaction_skeleton();
    skeleton.name = "mms-smooth";
    skeleton.eps = eps;
    skeleton.mu = mu;

    const double pi = 3.14159265358979323846;
    ManufacturedSolution ms;
    ms.u = [pi](double x, double t) { return std::sin(pi * x) * (1.0 - std::exp(-t)); };
    ms.u_x = [pi](double x, double t) { return pi * std::cos(pi * x) * (1.0 - std::exp(-t)); };
    ms.u_xx = [pi](double x, double t) { return -pi * pi * std::sin(pi * x) * (1.0 - std::exp(-t)); };
    ms.u_t = [pi](double x, double t) { return std::sin(pi * x) * std::exp(-t); };

    return {mms_problem(ms, skeleton), ms.u};
}

MmsCase make_mms_layer(double eps, double mu)
{
    ProblemSpec skeleton = convection_reaction_skeleton();
    skeleton.name = "mms-layer";
    skeleton.eps = eps;
    skeleton.mu = mu;

    // steep but parameter-independent profile across x = d
    const double w = 0.05, c = 0.5;
    ManufacturedSolution ms;
    ms.u = [=](double x, double t) { return t * std::tanh((x - c) / w); };
    ms.u_x = [=](double x, double t) {
        const double th = std::tanh((x - c) / w);
        return t * (1.0 - th * th) / w;
    };
    ms.u_xx = [=](double x, double t) {
        const double th = std::tanh((x - c) / w);
        return -2.0 * t * th * (1.0 - th * th) / (w * w);
    };
    ms.u_t = [=](double x, double) { return std::tanh((x - c) / w); };

    return {mms_problem(ms, skeleton), ms.u};
}

} // namespace

const std::vector<std::string>& builtin_example_names()
{
    static const std::vector<std::string> names = {"example1", "example2", "example3",
                                                   "mms-smooth", "mms-layer"};
    return names;
}

ProblemSpec builtin_example(const std::string& name)
{
    if (name == "example1")
        return make_example1();
    if (name == "example2")
        return make_example2();
    if (name == "example3")
        return make_example3();
    if (name == "mms-smooth" || name == "mms-layer")
        return builtin_mms(name).spec;

    std::ostringstream msg;
    msg << "unknown example '" << name << "'; valid names:";
    for (const auto& n : builtin_example_names())
        msg << ' ' << n;
    throw ConfigError(msg.str());
}

MmsCase builtin_mms(const std::string& name)
{
    if (name == "mms-smooth")
        return make_mms_smooth(std::ldexp(1.0, -6), std::ldexp(1.0, -16));
    if (name == "mms-layer")
        return make_mms_layer(std::ldexp(1.0, -8), std::ldexp(1.0, -20));
    throw ConfigError("unknown manufactured problem '" + name +
                      "'; valid names: mms-smooth mms-layer");
}

MmsCase builtin_mms(const std::string& name, double eps, double mu)
{
    if (name == "mms-smooth")
        return make_mms_smooth(eps, mu);
    if (name == "mms-layer")
        return make_mms_layer(eps, mu);
    throw ConfigError("unknown manufactured problem '" + name +
                      "'; valid names: mms-smooth mms-layer");
}

ProblemSpec mms_problem(const ManufacturedSolution& ms, const ProblemSpec& skeleton)
{
    if (!ms.u || !ms.u_x || !ms.u_xx || !ms.u_t)
        throw DomainError("manufactured solution must supply u, u_x, u_xx, u_t");

    ProblemSpec s = skeleton;
    const double eps = s.eps, mu = s.mu;
    const auto a = s.a;
    const auto b = s.b;
    const auto u = ms.u;
    const auto ux = ms.u_x;
    const auto uxx = ms.u_xx;
    const auto ut = ms.u_t;

    s.f = PiecewiseCoefficient(
        [=](double x, double t) {
            return eps * uxx(x, t) + mu * a.left(x, t) * ux(x, t) - b.left(x, t) * u(x, t) -
                   ut(x, t);
        },
        [=](double x, double t) {
            return eps * uxx(x, t) + mu * a.right(x, t) * ux(x, t) - b.right(x, t) * u(x, t) -
                   ut(x, t);
        });
    s.p = [u](double t) { return u(0.0, t); };
    s.r = [u](double t) { return u(1.0, t); };
    s.q = [u](double x) { return u(x, 0.0); };

    if (std::abs(s.q(0.0) - s.p(0.0)) > 1e-12 || std::abs(s.q(1.0) - s.r(0.0)) > 1e-12)
        throw DomainError("manufactured solution violates corner compatibility");
    return s;
}

} // namespace sppde
