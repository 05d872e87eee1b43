#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/models.hpp"
#include "casimir/quadrature.hpp"

using namespace casimir;
using namespace casimir::models;
using cplx = std::complex<double>;

TEST_CASE("plasma permittivity vanishes at the plasma frequency", "[models]")
{
    const PlasmaParams p{1.12e16};
    const cplx eps = permittivity(DielectricModel(p), p.omega_p);
    CHECK(std::abs(eps) < 1e-12);
}

TEST_CASE("Drude copper value at 1e15 rad/s", "[models]")
{
    const cplx eps = permittivity(DielectricModel(copper_drude()), 1e15);
    CHECK(eps.real() == Catch::Approx(-124.42).epsilon(2e-4));
    CHECK(eps.imag() == Catch::Approx(1.731).epsilon(2e-3));
}

TEST_CASE("nonlocal model with v = 0 degenerates to Drude", "[models]")
{
    const NonlocalPhenomParams nl{1.12e16, 1.38e13, 0.0};
    const DrudeParams d{1.12e16, 1.38e13};
    for (double omega : {1e12, 1e14, 1e16}) {
        for (double k : {0.0, 1e7, 1e12}) {
            CHECK(std::abs(permittivity(DielectricModel(nl), omega, k) -
                           permittivity(DielectricModel(d), omega)) < 1e-12 *
                      std::abs(permittivity(DielectricModel(d), omega)));
        }
    }
}

TEST_CASE("nonlocal wavevector restriction", "[models]")
{
    const NonlocalPhenomParams nl{1.12e16, 1.38e13, 1e6};
    const double k_max = nl.gamma / nl.v; // 1.38e7
    CHECK_NOTHROW(permittivity(DielectricModel(nl), 1e14, 0.99 * k_max));
    CHECK_THROWS_AS(permittivity(DielectricModel(nl), 1e14, k_max), std::domain_error);
    // within the allowed range the imaginary part stays positive
    for (double k = 0.0; k < k_max; k += k_max / 7.0)
        CHECK(permittivity(DielectricModel(nl), 1e14, k).imag() >= 0.0);
}

TEST_CASE("graphene branches join continuously at |omega| = vF k", "[models]")
{
    const GrapheneTrParams g{};
    const double k = 3e7;
    const double boundary = g.v_F * k;
    CHECK(std::abs(permittivity(DielectricModel(g), boundary, k) - 1.0) < 1e-12);
    const cplx below = permittivity(DielectricModel(g), boundary * (1.0 - 1e-9), k);
    const cplx above = permittivity(DielectricModel(g), boundary * (1.0 + 1e-9), k);
    CHECK(std::abs(below - above) < 1e-3);
    CHECK(std::abs(permittivity(DielectricModel(g), 1e15, 0.0) - 1.0) == 0.0);
}

TEST_CASE("crossing symmetry: conj(eps(w)) equals the formula at -w", "[models]")
{
    // evaluate the model formulas directly at negative frequency
    const double wp = 1.12e16, ga = 1.38e13, w = 3.7e14;

    const cplx drude_pos = permittivity(DielectricModel(DrudeParams{wp, ga}), w);
    const cplx drude_neg = 1.0 - wp * wp / (cplx(-w, 0) * cplx(-w, ga));
    CHECK(std::abs(std::conj(drude_pos) - drude_neg) < 1e-12 * std::abs(drude_pos));

    const double v = 1e6, k = 1e6;
    const cplx nl_pos = permittivity(DielectricModel(NonlocalPhenomParams{wp, ga, v}), w, k);
    const cplx nl_neg =
        1.0 - wp * wp / (cplx(-w, 0) * cplx(-w, ga)) * (1.0 + cplx(0, v * k) / cplx(-w, 0));
    CHECK(std::abs(std::conj(nl_pos) - nl_neg) < 1e-12 * std::abs(nl_pos));

    const GrapheneTrParams g{};
    const double kg = 1e8, wg = 2.0 * g.v_F * kg; // upper branch
    const cplx g_pos = permittivity(DielectricModel(g), wg, kg);
    const double pref = 0.5 * std::numbers::pi * g.alpha * kg * constants::c / (wg * wg);
    const cplx g_neg = cplx(1.0, pref * (-1.0) * std::sqrt(wg * wg - g.v_F * g.v_F * kg * kg));
    CHECK(std::abs(std::conj(g_pos) - g_neg) < 1e-12 * std::abs(g_pos));
}

TEST_CASE("passivity over twelve decades", "[models]")
{
    const DielectricModel drude(copper_drude());
    const DielectricModel nl(NonlocalPhenomParams{1.12e16, 1.38e13, 1e6});
    const DielectricModel graphene((GrapheneTrParams()));
    for (double lg = 6.0; lg <= 18.0; lg += 0.25) {
        const double w = std::pow(10.0, lg);
        CHECK(permittivity(drude, w).imag() >= 0.0);
        CHECK(permittivity(nl, w, 1e6).imag() >= 0.0);
        CHECK(permittivity(graphene, w, 1e7).imag() >= 0.0);
    }
}

TEST_CASE("plasma is the small-gamma limit of Drude", "[models]")
{
    // |eps_D - eps_p| / |eps_p| ~ gamma/omega, so gamma = 1e-8 omega_p
    // reaches 1e-6 relative once omega is above 1e-2 omega_p
    const double wp = 1.12e16;
    for (double w : {1.2e14, 1e15, 3e16}) {
        const cplx d = permittivity(DielectricModel(DrudeParams{wp, wp * 1e-8}), w);
        const cplx p = permittivity(DielectricModel(PlasmaParams{wp}), w);
        CHECK(std::abs(d - p) <= 1e-6 * std::abs(p));
    }
}

TEST_CASE("high-frequency transparency", "[models]")
{
    const double wp = 1.12e16;
    const double w = 100.0 * wp;
    CHECK(std::abs(permittivity(DielectricModel(copper_drude()), w) - 1.0) < 1e-4);
    CHECK(std::abs(permittivity(DielectricModel(PlasmaParams{wp}), w) - 1.0) < 1e-4);
    CHECK(std::abs(permittivity(DielectricModel(GrapheneTrParams{}), w, 1e7) - 1.0) < 1e-4);
}

TEST_CASE("imaginary-axis continuations", "[models]")
{
    const double wp = 1.12e16, ga = 1.38e13, xi = 2.468e14;
    CHECK(permittivity_imag_axis(DielectricModel(DrudeParams{wp, ga}), xi) ==
          Catch::Approx(1.0 + wp * wp / (xi * (xi + ga))).epsilon(1e-14));
    CHECK(permittivity_imag_axis(DielectricModel(PlasmaParams{wp}), xi) ==
          Catch::Approx(1.0 + wp * wp / (xi * xi)).epsilon(1e-14));
    CHECK_THROWS_AS(permittivity_imag_axis(DielectricModel(GrapheneTrParams{}), xi),
                    std::domain_error);
}

TEST_CASE("tabulated permittivity: interpolation and extrapolation", "[models]")
{
    // a purely lossy sample cannot match a lossless extrapolation model at
    // the percent level, so the mismatch gate is explicitly widened here
    std::istringstream csv("omega_rad_s,re_eps,im_eps\n"
                           "1e14,1,1\n"
                           "1e16,1,0.01\n");
    auto table = load_tabulated(csv, PlasmaParams{1e13}, /*mismatch_tol=*/2.0);
    const DielectricModel m(table);

    // geometric midpoint in frequency: linear midpoint in Re/Im
    const cplx mid = permittivity(m, 1e15);
    CHECK(mid.real() == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(mid.imag() == Catch::Approx(0.505).epsilon(1e-12));
    CHECK(mid.imag() > 0.0);

    // below the lowest sample: the extrapolation model verbatim
    const cplx low = permittivity(m, 1e12);
    CHECK(std::abs(low - permittivity(DielectricModel(PlasmaParams{1e13}), 1e12)) == 0.0);

    // at a sample: exact
    CHECK(std::abs(permittivity(m, 1e14) - cplx(1.0, 1.0)) == 0.0);

    // above the table: range error
    CHECK_THROWS_AS(permittivity(m, 2e16), std::out_of_range);

    // a well-matched Drude extrapolation passes the default gate
    const auto cu = copper_drude();
    const cplx e1 = detail::drude_eps(cu, 1e14), e2 = detail::drude_eps(cu, 1e15);
    std::ostringstream good;
    good << "omega_rad_s,re_eps,im_eps\n"
         << "1e14," << e1.real() << ',' << e1.imag() << "\n"
         << "1e15," << e2.real() << ',' << e2.imag() << "\n";
    std::istringstream good_in(good.str());
    CHECK_NOTHROW(load_tabulated(good_in, cu));
}

TEST_CASE("tabulated permittivity: format and passivity errors", "[models]")
{
    {
        std::istringstream empty("");
        CHECK_THROWS_AS(load_tabulated(empty, PlasmaParams{1e13}), FormatError);
    }
    {
        std::istringstream one_row("omega_rad_s,re_eps,im_eps\n1e14,1,1\n");
        CHECK_THROWS_AS(load_tabulated(one_row, PlasmaParams{1e13}), FormatError);
    }
    {
        std::istringstream unsorted("omega_rad_s,re_eps,im_eps\n1e16,1,0.01\n1e14,1,1\n");
        CHECK_THROWS_AS(load_tabulated(unsorted, PlasmaParams{1e13}), FormatError);
    }
    {
        std::istringstream dup("omega_rad_s,re_eps,im_eps\n1e14,1,1\n1e14,1,1\n");
        CHECK_THROWS_AS(load_tabulated(dup, PlasmaParams{1e13}), FormatError);
    }
    {
        std::istringstream neg("omega_rad_s,re_eps,im_eps\n1e14,1,-0.5\n1e16,1,0.01\n");
        CHECK_THROWS_AS(load_tabulated(neg, PlasmaParams{1e13}), PassivityError);
    }
    {
        std::istringstream bad_header("omega,re,im\n1e14,1,1\n1e16,1,0.01\n");
        CHECK_THROWS_AS(load_tabulated(bad_header, PlasmaParams{1e13}), FormatError);
    }
    {
        // extrapolation model wildly inconsistent with the lowest sample
        std::istringstream csv("omega_rad_s,re_eps,im_eps\n1e14,1,1\n1e16,1,0.01\n");
        CHECK_THROWS_AS(load_tabulated(csv, PlasmaParams{1e17}), FormatError);
    }
}

TEST_CASE("zero-frequency classification of the analytic models", "[models][classifier]")
{
    const double wp = 1.12e16;

    auto drude = zero_frequency_class(DielectricModel(copper_drude()));
    CHECK(drude.classification == ZeroFrequencyClass::vanishing);
    CHECK(std::abs(drude.limit) < 1e-6 * wp * wp);

    auto plasma = zero_frequency_class(DielectricModel(PlasmaParams{wp}));
    CHECK(plasma.classification == ZeroFrequencyClass::nonvanishing);
    CHECK(std::abs(plasma.limit - cplx(-wp * wp, 0.0)) < 1e-6 * wp * wp);

    // nonlocal: algebraic limit -wp^2 v k / gamma, the double pole the
    // wavevector-dependent part contributes
    const NonlocalPhenomParams nl{wp, 1.38e13, 1e6};
    const double k = 1e6;
    auto nonlocal = zero_frequency_class(DielectricModel(nl), k);
    CHECK(nonlocal.classification == ZeroFrequencyClass::nonvanishing);
    const double truth = -wp * wp * nl.v * k / nl.gamma;
    CHECK(std::abs(nonlocal.limit - cplx(truth, 0.0)) < 1e-6 * std::abs(truth));

    const GrapheneTrParams g{};
    const double kg = 1e7;
    auto graphene = zero_frequency_class(DielectricModel(g), kg);
    CHECK(graphene.classification == ZeroFrequencyClass::nonvanishing);
    const double gt = -0.5 * std::numbers::pi * g.alpha * constants::c * g.v_F * kg * kg;
    CHECK(std::abs(graphene.limit - cplx(gt, 0.0)) < 1e-4 * std::abs(gt));

    // graphene at k = 0 has no susceptibility at all
    auto trivial = zero_frequency_class(DielectricModel(g), 0.0);
    CHECK(trivial.classification == ZeroFrequencyClass::vanishing);
}

TEST_CASE("classifier failure is an explicit error", "[models][classifier]")
{
    // the classifier is Richardson extrapolation underneath; feed it a
    // sequence with no limit through the same machinery
    auto f = [](double w) { return std::complex<double>(std::sin(1e8 / w), 0.0); };
    auto r = quadrature::richardson_limit(f, 1.0, 0.5, 20, 1e-10, 1.0);
    CHECK_FALSE(r.converged);
}
