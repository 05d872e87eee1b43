#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "casimir/bessel.hpp"
#include "casimir/quadrature.hpp"

using namespace casimir::quadrature;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

// int_0^inf t^2 e^{-b t} J1(c t) dt = 3 b c / (b^2 + c^2)^{5/2}
double laplace_bessel_truth(double b, double c)
{
    const double s = b * b + c * c;
    return 3.0 * b * c / (s * s * std::sqrt(s));
}
} // namespace

TEST_CASE("decaying exponential over the half line", "[quadrature]")
{
    AdaptiveOptions o;
    o.rel_tol = 1e-10;
    o.decay_scale = 1.0;
    auto r = integrate_adaptive([](double t) { return std::exp(-t); }, 0.0, inf, o);
    CHECK(r.converged);
    CHECK(r.value == Catch::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(r.value - 1.0) <= 10.0 * r.abs_error + 1e-14);
}

TEST_CASE("integrable endpoint singularity with the sqrt transform", "[quadrature]")
{
    AdaptiveOptions o;
    o.rel_tol = 1e-10;
    o.endpoint = EndpointTransform::sqrt_lower;
    auto r = integrate_adaptive([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, o);
    CHECK(r.converged);
    CHECK(r.value == Catch::Approx(2.0).epsilon(1e-10));

    o.endpoint = EndpointTransform::sqrt_upper;
    auto r2 = integrate_adaptive([](double t) { return 1.0 / std::sqrt(1.0 - t); }, 0.0, 1.0, o);
    CHECK(r2.value == Catch::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("infinite range requires a decay scale", "[quadrature]")
{
    CHECK_THROWS_AS(integrate_adaptive([](double t) { return std::exp(-t); }, 0.0, inf, {}),
                    std::invalid_argument);
}

TEST_CASE("exhausted subdivisions reported honestly", "[quadrature]")
{
    AdaptiveOptions o;
    o.rel_tol = 1e-14;
    o.max_intervals = 4; // too few for this kink
    auto r = integrate_adaptive([](double t) { return std::abs(t - 0.3141); }, 0.0, 1.0, o);
    CHECK_FALSE(r.converged);
}

TEST_CASE("Laplace-Bessel integral: adaptive and oscillatory routes agree", "[quadrature]")
{
    const double truth = laplace_bessel_truth(2.0, 1.0); // 6 / 5^{5/2}
    CHECK(truth == Catch::Approx(0.10733126291998991).epsilon(1e-14));

    auto f = [](double t) { return t * t * std::exp(-2.0 * t) * casimir::bessel::j1(t); };

    AdaptiveOptions ao;
    ao.rel_tol = 1e-10;
    ao.decay_scale = 2.0;
    auto ra = integrate_adaptive(f, 0.0, inf, ao);
    CHECK(ra.converged);
    CHECK(ra.value == Catch::Approx(truth).epsilon(1e-9));

    OscillationSpec osc{OscillationSpec::Kind::bessel_j1, 1.0, 2.0};
    auto ro = integrate_oscillatory(f, osc, 0.0, 1e-9);
    CHECK(ro.converged);
    CHECK(ro.value == Catch::Approx(truth).epsilon(1e-8));
    CHECK(std::abs(ra.value - ro.value) <= 10.0 * (ra.abs_error + ro.abs_error) + 1e-12);
}

TEST_CASE("Weber integral of J1 by lobe acceleration", "[quadrature]")
{
    // envelope decays only through the Bessel amplitude; the lobe series is
    // genuinely alternating and the accelerated sum must find 1
    auto f = [](double t) { return casimir::bessel::j1(t); };
    OscillationSpec osc{OscillationSpec::Kind::bessel_j1, 1.0, 0.05};
    auto r = integrate_oscillatory(f, osc, 0.0, 1e-8);
    CHECK(r.value == Catch::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("zero envelope gives an exact zero", "[quadrature]")
{
    auto f = [](double) { return 0.0; };
    OscillationSpec osc{OscillationSpec::Kind::bessel_j1, 1.0, 1.0};
    auto r = integrate_oscillatory(f, osc, 0.0, 1e-10);
    CHECK(r.value == 0.0);
    CHECK(r.abs_error == 0.0);
    CHECK(r.converged);
}

TEST_CASE("finite upper limit sums lobes directly", "[quadrature]")
{
    // int_0^X sin(5t) dt = (1 - cos(5X))/5 with a complex-exponential lobe split
    const double X = 7.31;
    auto f = [](double t) { return std::sin(5.0 * t); };
    OscillationSpec osc{OscillationSpec::Kind::complex_exponential, 5.0, 0.0};
    auto r = integrate_oscillatory(f, osc, 0.0, 1e-10, X);
    CHECK(r.converged);
    CHECK(r.value == Catch::Approx((1.0 - std::cos(5.0 * X)) / 5.0).margin(1e-9));
}

TEST_CASE("complex integrands share one subdivision", "[quadrature]")
{
    AdaptiveOptions o;
    o.rel_tol = 1e-11;
    o.decay_scale = 1.0;
    auto f = [](double t) { return std::exp(-t) * std::complex<double>(std::cos(3.0 * t), std::sin(3.0 * t)); };
    auto r = integrate_adaptive(f, 0.0, inf, o);
    // int e^{-t} e^{3it} = 1/(1 - 3i)
    const std::complex<double> truth = 1.0 / std::complex<double>(1.0, -3.0);
    CHECK(std::abs(r.value - truth) < 1e-10);
}

TEST_CASE("coth_half values and small-argument behaviour", "[quadrature]")
{
    CHECK(coth_half(10.0) == Catch::Approx(1.000000004122307).epsilon(1e-14));
    CHECK(coth_half(1.0) == Catch::Approx(1.3130352854993312).epsilon(1e-13));
    CHECK(1e-8 * coth_half(1e-8) == Catch::Approx(1.0).margin(1e-10));
    CHECK_THROWS_AS(coth_half(0.0), std::domain_error);
    CHECK_THROWS_AS(coth_half(-1.0), std::domain_error);
}

TEST_CASE("tightening the tolerance never inflates the reported error", "[quadrature]")
{
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> uni(0.5, 4.0);
    for (int i = 0; i < 40; ++i) {
        const double al = uni(rng);
        auto f = [al](double t) { return std::exp(-al * t) * std::cos(2.0 * al * t); };
        double prev_err = inf;
        for (double tol : {1e-4, 1e-6, 1e-8, 1e-10}) {
            AdaptiveOptions o;
            o.rel_tol = tol;
            o.decay_scale = al;
            auto r = integrate_adaptive(f, 0.0, inf, o);
            CHECK(r.abs_error <= prev_err * (1.0 + 1e-12));
            prev_err = r.abs_error;
        }
    }
}

TEST_CASE("richardson extrapolation of a polynomial-plus-limit sequence", "[quadrature]")
{
    auto f = [](double x) { return std::complex<double>(3.0 - 2.0 * x + x * x, 0.5 * x); };
    auto r = richardson_limit(f, 0.1, 0.5, 20, 1e-12, 3.0);
    CHECK(r.converged);
    CHECK(std::abs(r.limit - std::complex<double>(3.0, 0.0)) < 1e-10);

    // a sequence with no limit must not claim convergence
    auto bad = [](double x) { return std::complex<double>(std::sin(1.0 / x), 0.0); };
    auto rb = richardson_limit(bad, 0.1, 0.5, 18, 1e-12, 1.0);
    CHECK_FALSE(rb.converged);
}
