#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/quadrature.hpp"

// Dielectric response models evaluated on the real frequency axis:
// Drude and plasma metals, the phenomenological nonlocal transverse
// permittivity, the T=0 transverse permittivity of graphene, and tabulated
// optical data with an analytic low-frequency extrapolation.
//
// All evaluations are pure; model values are immutable after construction.

namespace casimir::models {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PassivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ClassificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DrudeParams {
    double omega_p; ///< plasma frequency [rad/s]
    double gamma;   ///< relaxation parameter [rad/s]
};

struct PlasmaParams {
    double omega_p; ///< plasma frequency [rad/s]
};

/// Spatially nonlocal transverse permittivity
///   eps(w,k) = 1 - wp^2/(w(w+ig)) * (1 + i v k / w),
/// valid for k < gamma/v where its imaginary part stays positive.
/// v = 0 degenerates to the Drude model with no wavevector restriction.
struct NonlocalPhenomParams {
    double omega_p;
    double gamma;
    double v; ///< velocity parameter, of the order of the Fermi velocity [m/s]
};

/// Transverse permittivity of pristine graphene at T = 0, which carries a
/// second-order pole in omega at fixed k.
struct GrapheneTrParams {
    double v_F = constants::c / 300.0;        ///< Fermi velocity [m/s]
    double alpha = constants::alpha_fs;       ///< fine-structure constant
};

/// Optical data on a strictly increasing frequency grid, interpolated
/// log-linearly in frequency (separately in Re and Im) and continued below
/// the lowest sample by a Drude or plasma extrapolation.
struct TabulatedPermittivity {
    struct Sample {
        double omega;
        std::complex<double> eps;
    };
    std::vector<Sample> samples;
    std::variant<DrudeParams, PlasmaParams> extrapolation;
};

using DielectricModel = std::variant<DrudeParams, PlasmaParams, NonlocalPhenomParams,
                                     GrapheneTrParams, TabulatedPermittivity>;

/// Drude parameters of copper used throughout: wp = 1.12e16 rad/s,
/// gamma = 1.38e13 rad/s.
inline DrudeParams copper_drude() { return {1.12e16, 1.38e13}; }
inline PlasmaParams copper_plasma() { return {1.12e16}; }

/// True for models whose response depends on the wavevector as well as the
/// frequency.
inline bool is_nonlocal(const DielectricModel& m)
{
    return std::holds_alternative<NonlocalPhenomParams>(m) ||
           std::holds_alternative<GrapheneTrParams>(m);
}

namespace detail {

inline void validate(const DrudeParams& p)
{
    if (!(p.omega_p > 0.0) || !(p.gamma > 0.0))
        throw std::invalid_argument("Drude parameters must be positive");
}
inline void validate(const PlasmaParams& p)
{
    if (!(p.omega_p > 0.0)) throw std::invalid_argument("plasma frequency must be positive");
}
inline void validate(const NonlocalPhenomParams& p)
{
    if (!(p.omega_p > 0.0) || !(p.gamma > 0.0) || !(p.v >= 0.0))
        throw std::invalid_argument("nonlocal model parameters out of range");
}
inline void validate(const GrapheneTrParams& p)
{
    if (!(p.v_F > 0.0) || !(p.v_F < constants::c))
        throw std::invalid_argument("graphene Fermi velocity must lie in (0, c)");
}

inline std::complex<double> drude_eps(const DrudeParams& p, double omega)
{
    const std::complex<double> w(omega, 0.0);
    return 1.0 - p.omega_p * p.omega_p / (w * (w + std::complex<double>(0.0, p.gamma)));
}

inline std::complex<double> plasma_eps(const PlasmaParams& p, double omega)
{
    return {1.0 - p.omega_p * p.omega_p / (omega * omega), 0.0};
}

inline std::complex<double> nonlocal_eps(const NonlocalPhenomParams& p, double omega, double k)
{
    if (p.v > 0.0 && !(k < p.gamma / p.v))
        throw std::domain_error("nonlocal permittivity requires k < gamma/v");
    const std::complex<double> w(omega, 0.0);
    const std::complex<double> drude = p.omega_p * p.omega_p / (w * (w + std::complex<double>(0.0, p.gamma)));
    return 1.0 - drude * (1.0 + std::complex<double>(0.0, p.v * k / omega));
}

inline std::complex<double> graphene_eps(const GrapheneTrParams& p, double omega, double k)
{
    if (k == 0.0) return {1.0, 0.0};
    const double vk = p.v_F * k;
    const double pref = 0.5 * std::numbers::pi * p.alpha * k * constants::c / (omega * omega);
    if (std::abs(omega) < vk)
        return {1.0 - pref * std::sqrt(vk * vk - omega * omega), 0.0};
    // Printed without the leading 1 in some sources; normalised here so the
    // function is continuous at |omega| = v_F k and tends to 1 at high
    // frequency.
    const double s = omega > 0.0 ? 1.0 : -1.0;
    return {1.0, pref * s * std::sqrt(omega * omega - vk * vk)};
}

inline std::complex<double> tabulated_eps(const TabulatedPermittivity& t, double omega)
{
    const auto& s = t.samples;
    if (omega < s.front().omega) {
        return std::visit(
            [&](const auto& p) -> std::complex<double> {
                if constexpr (std::is_same_v<std::decay_t<decltype(p)>, DrudeParams>)
                    return drude_eps(p, omega);
                else
                    return plasma_eps(p, omega);
            },
            t.extrapolation);
    }
    if (omega > s.back().omega)
        throw std::out_of_range("tabulated permittivity queried above the sampled range");
    auto hi = std::lower_bound(s.begin(), s.end(), omega,
                               [](const TabulatedPermittivity::Sample& a, double w) { return a.omega < w; });
    if (hi->omega == omega) return hi->eps;
    auto lo = hi - 1;
    const double t01 = (std::log(omega) - std::log(lo->omega)) /
                       (std::log(hi->omega) - std::log(lo->omega));
    return {lo->eps.real() + t01 * (hi->eps.real() - lo->eps.real()),
            lo->eps.imag() + t01 * (hi->eps.imag() - lo->eps.imag())};
}

} // namespace detail

/// Permittivity at real frequency omega > 0; k enters only for the nonlocal
/// models and must be >= 0.
inline std::complex<double> permittivity(const DielectricModel& model, double omega, double k = 0.0)
{
    if (!(omega > 0.0)) throw std::domain_error("permittivity: omega must be positive");
    if (!(k >= 0.0)) throw std::domain_error("permittivity: k must be non-negative");
    return std::visit(
        [&](const auto& p) -> std::complex<double> {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, DrudeParams>) return detail::drude_eps(p, omega);
            else if constexpr (std::is_same_v<P, PlasmaParams>) return detail::plasma_eps(p, omega);
            else if constexpr (std::is_same_v<P, NonlocalPhenomParams>) return detail::nonlocal_eps(p, omega, k);
            else if constexpr (std::is_same_v<P, GrapheneTrParams>) return detail::graphene_eps(p, omega, k);
            else return detail::tabulated_eps(p, omega);
        },
        model);
}

/// Permittivity on the imaginary frequency axis, eps(i xi), for the models
/// with a closed-form continuation.  Used by the Matsubara representation.
inline double permittivity_imag_axis(const DielectricModel& model, double xi, double k = 0.0)
{
    if (!(xi > 0.0)) throw std::domain_error("permittivity_imag_axis: xi must be positive");
    return std::visit(
        [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, DrudeParams>)
                return 1.0 + p.omega_p * p.omega_p / (xi * (xi + p.gamma));
            else if constexpr (std::is_same_v<P, PlasmaParams>)
                return 1.0 + p.omega_p * p.omega_p / (xi * xi);
            else if constexpr (std::is_same_v<P, NonlocalPhenomParams>) {
                if (p.v > 0.0 && !(k < p.gamma / p.v))
                    throw std::domain_error("nonlocal permittivity requires k < gamma/v");
                return 1.0 + p.omega_p * p.omega_p / (xi * (xi + p.gamma)) * (1.0 + p.v * k / xi);
            } else
                throw std::domain_error(
                    "permittivity_imag_axis: no analytic continuation for this model");
        },
        model);
}

enum class ZeroFrequencyClass { vanishing, nonvanishing };

struct ZeroFrequencyLimit {
    ZeroFrequencyClass classification;
    std::complex<double> limit;    ///< lim_{w->0} w^2 (eps - 1)
    double reference_scale;        ///< scale against which "vanishing" is judged
};

namespace detail {

inline double characteristic_omega(const DielectricModel& m, double k)
{
    return std::visit(
        [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, DrudeParams>) return std::min(p.omega_p, p.gamma);
            else if constexpr (std::is_same_v<P, PlasmaParams>) return p.omega_p;
            else if constexpr (std::is_same_v<P, NonlocalPhenomParams>) return std::min(p.omega_p, p.gamma);
            else if constexpr (std::is_same_v<P, GrapheneTrParams>)
                return k > 0.0 ? p.v_F * k : 1.0;
            else
                return std::visit([&](const auto& e) { return characteristic_omega(DielectricModel(e), k); },
                                  p.extrapolation);
        },
        m);
}

inline double classifier_scale(const DielectricModel& m, double k)
{
    return std::visit(
        [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, DrudeParams>) return p.omega_p * p.omega_p;
            else if constexpr (std::is_same_v<P, PlasmaParams>) return p.omega_p * p.omega_p;
            else if constexpr (std::is_same_v<P, NonlocalPhenomParams>) return p.omega_p * p.omega_p;
            else if constexpr (std::is_same_v<P, GrapheneTrParams>)
                return 0.5 * std::numbers::pi * p.alpha * constants::c * p.v_F * k * k;
            else
                return std::visit([&](const auto& e) { return classifier_scale(DielectricModel(e), k); },
                                  p.extrapolation);
        },
        m);
}

} // namespace detail

/// Numerically classify the zero-frequency behaviour of the susceptibility:
/// estimates lim_{w->0} w^2 (eps(w,k) - 1) by Richardson extrapolation over
/// a geometric frequency sequence.  "vanishing" means the limit is smaller
/// than tol times the model's natural scale (omega_p^2 for the metallic
/// models, the double-pole coefficient for graphene).
inline ZeroFrequencyLimit zero_frequency_class(const DielectricModel& model, double k = 0.0,
                                               double tol = 1e-6)
{
    const double scale = detail::classifier_scale(model, k);
    auto f = [&](double omega) { return omega * omega * (permittivity(model, omega, k) - 1.0); };

    ZeroFrequencyLimit out{};
    out.reference_scale = scale;

    if (scale == 0.0) {
        // degenerate case (graphene at k = 0): the susceptibility itself is 0
        out.limit = f(detail::characteristic_omega(model, k) * 1e-3);
        out.classification = std::abs(out.limit) < 1e-300 ? ZeroFrequencyClass::vanishing
                                                          : ZeroFrequencyClass::nonvanishing;
        return out;
    }

    const double omega0 = 1e-2 * detail::characteristic_omega(model, k);
    auto r = quadrature::richardson_limit(f, omega0, 0.5, 22, 1e-10, scale);
    if (!r.converged)
        throw ClassificationError("zero_frequency_class: extrapolation did not converge");
    out.limit = r.limit;
    out.classification = std::abs(out.limit) < tol * scale ? ZeroFrequencyClass::vanishing
                                                           : ZeroFrequencyClass::nonvanishing;
    return out;
}

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_field(std::string_view field, int line_no)
{
    field = trim(field);
    double value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw FormatError("tabulated CSV: bad numeric field on line " + std::to_string(line_no));
    return value;
}

} // namespace detail

/// Ingest a permittivity table from CSV with header
/// `omega_rad_s,re_eps,im_eps`, rows sorted ascending in frequency.
/// The extrapolation model continues the table below its lowest sample and
/// must agree with that sample to within `mismatch_tol` (relative).
inline TabulatedPermittivity load_tabulated(std::istream& in,
                                            std::variant<DrudeParams, PlasmaParams> extrapolation,
                                            double mismatch_tol = 0.1)
{
    std::string line;
    if (!std::getline(in, line)) throw FormatError("tabulated CSV: empty input");
    if (detail::trim(line) != "omega_rad_s,re_eps,im_eps")
        throw FormatError("tabulated CSV: expected header omega_rad_s,re_eps,im_eps");

    TabulatedPermittivity table;
    table.extrapolation = extrapolation;
    std::visit([](const auto& p) { detail::validate(p); }, extrapolation);

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view row = detail::trim(line);
        if (row.empty()) continue;
        const auto c1 = row.find(',');
        const auto c2 = c1 == std::string_view::npos ? std::string_view::npos : row.find(',', c1 + 1);
        if (c2 == std::string_view::npos)
            throw FormatError("tabulated CSV: expected three columns on line " + std::to_string(line_no));
        const double omega = detail::parse_field(row.substr(0, c1), line_no);
        const double re = detail::parse_field(row.substr(c1 + 1, c2 - c1 - 1), line_no);
        const double im = detail::parse_field(row.substr(c2 + 1), line_no);
        if (!(omega > 0.0))
            throw FormatError("tabulated CSV: frequencies must be positive (line " +
                              std::to_string(line_no) + ")");
        if (im < 0.0)
            throw PassivityError("tabulated CSV: negative Im eps on line " + std::to_string(line_no));
        if (!table.samples.empty() && !(omega > table.samples.back().omega))
            throw FormatError("tabulated CSV: frequencies must be strictly increasing (line " +
                              std::to_string(line_no) + ")");
        table.samples.push_back({omega, {re, im}});
    }
    if (table.samples.size() < 2)
        throw FormatError("tabulated CSV: need at least two samples");

    const auto& first = table.samples.front();
    const std::complex<double> eps_ex = std::visit(
        [&](const auto& p) -> std::complex<double> {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, DrudeParams>)
                return detail::drude_eps(p, first.omega);
            else
                return detail::plasma_eps(p, first.omega);
        },
        extrapolation);
    if (std::abs(eps_ex - first.eps) > mismatch_tol * std::abs(first.eps))
        throw FormatError("tabulated CSV: extrapolation model does not match the lowest sample");

    return table;
}

} // namespace casimir::models
