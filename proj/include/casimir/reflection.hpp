#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>

#include "casimir/constants.hpp"
#include "casimir/models.hpp"

// Perpendicular wavenumbers on the retarded branch and the Fresnel
// reflection amplitudes for both polarizations,
//   r_TM = (eps q - q1) / (eps q + q1),   r_TE = (q - q1) / (q + q1),
// with q = branch(k^2 - w^2/c^2), q1 = branch(k^2 - eps w^2/c^2).
//
// The branch is fixed once: Re >= 0, and Im <= 0 on the cut.  That makes
// branch_sqrt the analytic continuation from the lower half-plane, which is
// exactly what the contour-rotated pressure integrals need, and it is
// validated end to end by the Matsubara oracle equivalence.

namespace casimir::reflection {

enum class Polarization { tm, te };
enum class Sector { propagating, evanescent };

/// `flipped` is a test hook that resolves the square-root ties the opposite
/// way; it exists so the oracle-equivalence test can demonstrate that a
/// wrong branch is detected.
enum class BranchConvention { retarded, flipped };

/// Square root with Re >= 0, tie-broken by Im <= 0 when Re = 0.
inline std::complex<double> branch_sqrt(std::complex<double> z,
                                        BranchConvention bc = BranchConvention::retarded)
{
    std::complex<double> s = std::sqrt(z);
    if (bc == BranchConvention::retarded) {
        if (s.real() < 0.0 || (s.real() == 0.0 && s.imag() > 0.0)) s = -s;
    } else {
        if (s.imag() < 0.0) s = std::conj(s);
        if (s.real() < 0.0) s = -s;
    }
    return s;
}

struct PerpWavenumbers {
    std::complex<double> q;  ///< vacuum side
    std::complex<double> q1; ///< inside the medium
};

/// Perpendicular wavenumbers for real (omega, k) and permittivity eps.
inline PerpWavenumbers perp_wavenumbers(double omega, double k, std::complex<double> eps,
                                        BranchConvention bc = BranchConvention::retarded)
{
    if (!(omega > 0.0) || !(k >= 0.0))
        throw std::domain_error("perp_wavenumbers: require omega > 0 and k >= 0");
    const double w2c2 = (omega / constants::c) * (omega / constants::c);
    return {branch_sqrt(std::complex<double>(k * k - w2c2, 0.0), bc),
            branch_sqrt(k * k - eps * w2c2, bc)};
}

/// In-medium wavenumber from the vacuum one: q1^2 = q^2 + (1 - eps) w^2/c^2.
/// Valid for complex q; this is the form the rotated pressure contour uses.
inline std::complex<double> q1_from_q(std::complex<double> q, std::complex<double> eps,
                                      double omega,
                                      BranchConvention bc = BranchConvention::retarded)
{
    const double w2c2 = (omega / constants::c) * (omega / constants::c);
    return branch_sqrt(q * q + (1.0 - eps) * w2c2, bc);
}

/// Fresnel reflection amplitude of a single vacuum/medium interface.
inline std::complex<double> fresnel_amplitude(Polarization pol, std::complex<double> eps,
                                              std::complex<double> q, std::complex<double> q1)
{
    if (pol == Polarization::te) return (q - q1) / (q + q1);
    return (eps * q - q1) / (eps * q + q1);
}

struct ReflectionInput {
    Polarization pol;
    double omega; ///< rad/s, > 0
    double k;     ///< 1/m, >= 0
    Sector sector;

    static ReflectionInput make(Polarization pol, double omega, double k)
    {
        if (!(omega > 0.0) || !(k >= 0.0))
            throw std::domain_error("ReflectionInput: require omega > 0 and k >= 0");
        const Sector s = k <= omega / constants::c ? Sector::propagating : Sector::evanescent;
        return {pol, omega, k, s};
    }
};

/// Reflection coefficient of the given model; model domain errors (e.g. the
/// nonlocal k-range) propagate.
inline std::complex<double> fresnel(const ReflectionInput& in, const models::DielectricModel& model,
                                    BranchConvention bc = BranchConvention::retarded)
{
    const Sector expected =
        in.k <= in.omega / constants::c ? Sector::propagating : Sector::evanescent;
    if (in.sector != expected)
        throw std::domain_error("fresnel: sector label inconsistent with (omega, k)");
    const std::complex<double> eps = models::permittivity(model, in.omega, in.k);
    const PerpWavenumbers pw = perp_wavenumbers(in.omega, in.k, eps, bc);
    return fresnel_amplitude(in.pol, eps, pw.q, pw.q1);
}

/// Approximate location (in q = sqrt(k^2 - w^2/c^2)) of the TM surface-mode
/// pole eps q + q1 = 0, where |r_TM| peaks in the evanescent sector.  Used
/// as a quadrature refinement hint; nullopt when no sharp feature exists.
inline std::optional<double> tm_plasmon_q(std::complex<double> eps, double omega)
{
    if (eps.real() >= -1.0) return std::nullopt;
    // eps^2 q^2 = q1^2 = q^2 + (1-eps) w^2/c^2  =>  q^2 = -w^2 / ((1+eps) c^2)
    const std::complex<double> q2 =
        -(omega / constants::c) * (omega / constants::c) / (1.0 + eps);
    const std::complex<double> q = std::sqrt(q2);
    const double qr = std::abs(q.real());
    if (!(qr > 0.0) || !std::isfinite(qr)) return std::nullopt;
    // broad, heavily damped peaks do not need a hint
    if (std::abs(q.imag()) > 0.5 * qr) return std::nullopt;
    return qr;
}

} // namespace casimir::reflection
