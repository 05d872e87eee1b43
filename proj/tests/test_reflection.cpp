#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "casimir/constants.hpp"
#include "casimir/models.hpp"
#include "casimir/reflection.hpp"

using namespace casimir;
using namespace casimir::reflection;
using cplx = std::complex<double>;
namespace kc = constants;

TEST_CASE("branch convention on the perpendicular wavenumbers", "[reflection]")
{
    // vacuum degenerate case
    auto pw = perp_wavenumbers(1.0 * kc::c, 2.0, cplx(1.0, 0.0));
    CHECK(pw.q1 == pw.q);

    // evanescent vacuum: omega/c = 1, k = 2 -> q = sqrt(3), real
    CHECK(pw.q.real() == Catch::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(pw.q.imag() == 0.0);

    // propagating vacuum: omega/c = 2, k = 1 -> q = -i sqrt(3)
    auto pw2 = perp_wavenumbers(2.0 * kc::c, 1.0, cplx(1.0, 0.0));
    CHECK(pw2.q.real() == 0.0);
    CHECK(pw2.q.imag() == Catch::Approx(-std::sqrt(3.0)).epsilon(1e-14));

    // retarded half-plane conditions for a lossy medium
    auto pw3 = perp_wavenumbers(1e15, 1e6, cplx(-50.0, 37.0));
    CHECK(pw3.q1.real() >= 0.0);
    CHECK(pw3.q1.imag() <= 0.0);
}

TEST_CASE("ideal-metal limit of the Fresnel amplitudes", "[reflection]")
{
    const double omega = 1e15, k = 2.0 * omega / kc::c;
    const cplx eps(1e12, 1e6);
    const auto pw = perp_wavenumbers(omega, k, eps);
    CHECK(std::abs(fresnel_amplitude(Polarization::te, eps, pw.q, pw.q1) - cplx(-1.0, 0.0)) < 1e-4);
    CHECK(std::abs(fresnel_amplitude(Polarization::tm, eps, pw.q, pw.q1) - cplx(1.0, 0.0)) < 1e-4);
}

TEST_CASE("Drude TE reflection dies linearly at zero frequency", "[reflection]")
{
    const auto model = models::DielectricModel(models::copper_drude());
    const double gamma = models::copper_drude().gamma;
    const double k = 1e6;
    const cplx r1 = fresnel(ReflectionInput::make(Polarization::te, 1e-6 * gamma, k), model);
    const cplx r2 = fresnel(ReflectionInput::make(Polarization::te, 1e-7 * gamma, k), model);
    CHECK(std::abs(r1) < 1e-3);
    CHECK(std::abs(r2) == Catch::Approx(std::abs(r1) / 10.0).epsilon(1e-3));
}

TEST_CASE("plasma TE reflection at k = omega_p / c in the static limit", "[reflection]")
{
    const double wp = 1.12e16;
    const auto model = models::DielectricModel(models::PlasmaParams{wp});
    const double k = wp / kc::c;
    const cplx r = fresnel(ReflectionInput::make(Polarization::te, 1e3, k), model);
    const double truth = (1.0 - std::sqrt(2.0)) / (1.0 + std::sqrt(2.0));
    CHECK(r.real() == Catch::Approx(truth).epsilon(1e-6));
    CHECK(std::abs(r.imag()) < 1e-12);
}

TEST_CASE("plasma-model evanescent coefficients are exactly real", "[reflection]")
{
    const auto model = models::DielectricModel(models::PlasmaParams{1.12e16});
    for (double omega : {1e13, 1e15, 5e15}) {
        for (double mult : {1.001, 1.5, 10.0, 1e4}) {
            const double k = mult * omega / kc::c;
            for (auto pol : {Polarization::tm, Polarization::te}) {
                const cplx r = fresnel(ReflectionInput::make(pol, omega, k), model);
                CHECK(std::abs(r.imag()) < 1e-15);
            }
        }
    }
}

TEST_CASE("TE passivity over random models and kinematics", "[reflection][property]")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double wp = std::pow(10.0, 14.0 + 3.0 * uni(rng));
        const double ga = wp * std::pow(10.0, -5.0 + 4.0 * uni(rng));
        const double omega = std::pow(10.0, 9.0 + 9.0 * uni(rng));
        const double k = std::pow(10.0, 9.0 * uni(rng));
        const auto model = (i % 2 == 0)
                               ? models::DielectricModel(models::DrudeParams{wp, ga})
                               : models::DielectricModel(models::PlasmaParams{wp});
        const cplx r = fresnel(ReflectionInput::make(Polarization::te, omega, k), model);
        CHECK(std::abs(r) <= 1.0 + 1e-12);
    }
}

TEST_CASE("continuity across the light cone", "[reflection]")
{
    // r has a sqrt cusp in k at the cone, and double precision cannot even
    // represent k-steps fine enough to resolve it there; the crossing is
    // therefore driven in q itself (imaginary below the cone, real above),
    // which exercises the same branch logic without the k-rounding floor
    const auto model = models::DielectricModel(models::copper_drude());
    const double omega = 1e15;
    const cplx eps = models::permittivity(model, omega);
    const double dq = 1e-3;
    for (auto pol : {Polarization::tm, Polarization::te}) {
        cplx prev{};
        bool first = true;
        double worst = 0.0;
        for (int j = -200; j <= 200; ++j) {
            const cplx q = j >= 0 ? cplx(j * dq, 0.0) : cplx(0.0, j * dq);
            const cplx q1 = q1_from_q(q, eps, omega);
            const cplx r = fresnel_amplitude(pol, eps, q, q1);
            if (!first) worst = std::max(worst, std::abs(r - prev));
            prev = r;
            first = false;
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("Drude with vanishing damping matches the plasma coefficients", "[reflection]")
{
    const double wp = 1.12e16;
    const auto drude = models::DielectricModel(models::DrudeParams{wp, wp * 1e-9});
    const auto plasma = models::DielectricModel(models::PlasmaParams{wp});
    const double omega = wp / 10.0;
    for (double mult : {0.3, 0.99, 1.01, 4.0}) {
        const double k = mult * omega / kc::c;
        for (auto pol : {Polarization::tm, Polarization::te}) {
            const cplx rd = fresnel(ReflectionInput::make(pol, omega, k), drude);
            const cplx rp = fresnel(ReflectionInput::make(pol, omega, k), plasma);
            CHECK(std::abs(rd - rp) <= 1e-6 * std::max(1.0, std::abs(rp)));
        }
    }
}

TEST_CASE("TM surface-mode hint marks the |r_TM| peak", "[reflection]")
{
    // plasmon region: omega well below omega_p/sqrt(2)
    const double wp = 1.12e16, omega = 2e15;
    const auto model = models::DielectricModel(models::copper_drude());
    const cplx eps = models::permittivity(model, omega);
    auto hint = tm_plasmon_q(eps, omega);
    REQUIRE(hint.has_value());

    auto r_at = [&](double q) {
        const double k = std::sqrt(q * q + (omega / kc::c) * (omega / kc::c));
        return std::abs(fresnel(ReflectionInput::make(Polarization::tm, omega, k), model));
    };
    // |r_TM| at the hint dwarfs the off-resonance values
    CHECK(r_at(*hint) > 5.0 * r_at(*hint * 3.0));
    CHECK(r_at(*hint) > 1.0);
}

TEST_CASE("flipped branch hook changes the lossy-medium wavenumber", "[reflection]")
{
    const cplx z(-3.0, -2.0);
    const cplx retarded = branch_sqrt(z, BranchConvention::retarded);
    const cplx flipped = branch_sqrt(z, BranchConvention::flipped);
    CHECK(retarded.imag() < 0.0);
    CHECK(flipped.imag() > 0.0);
    CHECK(std::abs(retarded - std::conj(flipped)) < 1e-15);
}

TEST_CASE("inconsistent sector labels are rejected", "[reflection]")
{
    const auto model = models::DielectricModel(models::copper_drude());
    ReflectionInput bad{Polarization::te, 1e15, 1e3, Sector::evanescent}; // k far below the cone
    CHECK_THROWS_AS(fresnel(bad, model), std::domain_error);
}
