#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/models.hpp"
#include "casimir/parallel.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/reflection.hpp"

// Casimir pressure between two identical parallel plates, decomposed along
// the real frequency axis into propagating/evanescent x TM/TE sectors, plus
// the standard imaginary-frequency (Matsubara) representation used as the
// independent oracle.  Negative pressure = attraction.
//
// Sector integrands, with q = (k^2 - w^2/c^2)^{1/2} on the retarded branch
// and z = r^2 e^{-2aq}:
//   propagating (k <= w/c):  Im[q z/(1-z)],  q = -i k_z purely imaginary
//   evanescent  (k >  w/c):  q Im[z/(1-z)],  q real
//
// The evanescent k-integral is done directly in q (k dk = q dq).  The
// propagating k_z-integral is NOT integrated along the real axis: for
// dissipationless mirrors the factor 1/(1 - z) has poles on the path (the
// undamped modes of the vacuum gap), and with dissipation it has sharp
// resonances just below it.  Writing the integral as -Re of the analytic
// integrand k_z^2 z/(1-z) and closing into the upper half-plane (where
// |e^{2 i a k_z}| decays and, by the gamma -> 0+ retarded prescription, no
// poles live) turns it into two smooth exponentially damped legs.  The
// on-axis mode contributions are then included exactly for every gamma >= 0
// instead of being chased adaptively.

namespace casimir::lifshitz {

using quadrature::QuadratureResult;
using reflection::BranchConvention;
using reflection::Polarization;
using reflection::Sector;

struct Geometry {
    double a; ///< plate separation [m]
    double T; ///< temperature [K]
};

inline void validate(const Geometry& g)
{
    if (!(g.a > 0.0) || !(g.T > 0.0)) throw std::invalid_argument("Geometry: require a > 0 and T > 0");
}

/// Reflecting side shared by both plates: a dielectric model, or the
/// ideal-metal limit r_TM = 1, r_TE = -1.
class Mirror {
public:
    static Mirror ideal()
    {
        Mirror m;
        m.ideal_ = true;
        return m;
    }
    explicit Mirror(models::DielectricModel model) : model_(std::move(model)) {}

    bool is_ideal() const { return ideal_; }
    const models::DielectricModel& model() const
    {
        if (ideal_) throw std::logic_error("Mirror: ideal metal has no dielectric model");
        return *model_;
    }

private:
    Mirror() = default;
    std::optional<models::DielectricModel> model_;
    bool ideal_ = false;
};

struct LifshitzOptions {
    double rel_tol = 1e-4;          ///< per-sector relative tolerance
    double omega_cut_factor = 30.0; ///< frequency truncation floor, omega_max = factor * c/(2a)
    BranchConvention branch = BranchConvention::retarded;
};

struct PressureBreakdown {
    QuadratureResult tm_prop, te_prop, tm_evan, te_evan;
    double total = 0.0;
    double total_abs_error = 0.0; ///< root-sum-square of the sector errors
    bool converged = false;

    double tm() const { return tm_prop.value + tm_evan.value; }
    double te() const { return te_prop.value + te_evan.value; }
};

/// First Matsubara frequency 2 pi k_B T / hbar [rad/s].
inline double matsubara_frequency(double T)
{
    return 2.0 * std::numbers::pi * constants::k_B * T / constants::hbar;
}

namespace detail {

using cplx = std::complex<double>;

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// z/(1-z) with the removable singularity of r-poles regularised: near a
/// pole of r the combination tends to -1.
inline cplx mode_kernel(cplx z)
{
    if (!finite(z)) return {-1.0, 0.0};
    const cplx d = 1.0 - z;
    if (std::abs(d) == 0.0) {
        if (z.imag() == 0.0)
            return {z.real() > 0.0 ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity(),
                    0.0};
        return z / d;
    }
    return z / d;
}

/// Everything fixed at one real frequency.
struct Slice {
    double omega;
    double a;
    bool ideal;
    cplx eps;
    cplx A; ///< (1 - eps) w^2 / c^2, so q1^2 = q^2 + A
    BranchConvention bc;

    static Slice make(const Mirror& mirror, double omega, double a, BranchConvention bc)
    {
        Slice s{omega, a, mirror.is_ideal(), {1.0, 0.0}, {0.0, 0.0}, bc};
        if (!s.ideal) {
            s.eps = models::permittivity(mirror.model(), omega);
            const double w2c2 = (omega / constants::c) * (omega / constants::c);
            s.A = (1.0 - s.eps) * w2c2;
        }
        return s;
    }

    cplx refl(Polarization pol, cplx q) const
    {
        if (ideal) return pol == Polarization::tm ? cplx{1.0, 0.0} : cplx{-1.0, 0.0};
        const cplx q1 = reflection::branch_sqrt(q * q + A, bc);
        return reflection::fresnel_amplitude(pol, eps, q, q1);
    }

    /// z/(1-z) at perpendicular wavenumber q (complex allowed).
    cplx w(Polarization pol, cplx q) const
    {
        const cplx r = refl(pol, q);
        if (!finite(r)) return {-1.0, 0.0};
        const cplx z = r * r * std::exp(-2.0 * a * q);
        return mode_kernel(z);
    }

    std::optional<double> plasmon_hint(Polarization pol) const
    {
        if (ideal || pol != Polarization::tm) return std::nullopt;
        auto hint = reflection::tm_plasmon_q(eps, omega);
        // beyond the e^{-2aq} window the feature cannot contribute
        if (hint && *hint > 50.0 / (2.0 * a)) return std::nullopt;
        return hint;
    }
};

struct InnerStats {
    std::int64_t evaluations = 0;
    int unconverged = 0;
    double max_abs_inner = 0.0;
};

/// Evanescent inner integral: int_0^inf q^2 Im[w] dq  (k dk = q dq).
inline double inner_evanescent(const Slice& s, Polarization pol, double rel_tol, double abs_tol,
                               InnerStats& stats)
{
    auto f = [&](double q) { return q * q * s.w(pol, {q, 0.0}).imag(); };
    quadrature::AdaptiveOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = abs_tol;
    opt.decay_scale = 2.0 * s.a;
    opt.max_intervals = 800;
    if (auto hint = s.plasmon_hint(pol)) opt.breakpoints = {*hint, 2.0 * *hint};
    auto r = quadrature::integrate_adaptive(f, 0.0, std::numeric_limits<double>::infinity(), opt);
    stats.evaluations += r.evaluations;
    if (!r.converged) ++stats.unconverged;
    return r.value;
}

/// Propagating inner integral int_0^{w/c} k dk Im[q z/(1-z)] via the rotated
/// contour.  The neglected top leg is bounded by ~(2aK)^3 e^{-span} relative
/// to the inner scale, 13 orders below the tolerances in use.
inline double inner_propagating(const Slice& s, Polarization pol, double rel_tol, double abs_tol,
                                InnerStats& stats)
{
    const double K = s.omega / constants::c;
    const double span = 40.0; // e^{-span} below double noise for any integrand here
    const double Y = span / (2.0 * s.a);

    quadrature::AdaptiveOptions vopt;
    vopt.rel_tol = rel_tol;
    vopt.abs_tol = abs_tol;
    vopt.max_intervals = 800;
    if (auto hint = s.plasmon_hint(pol)) {
        if (*hint < Y) vopt.breakpoints = {*hint, std::min(2.0 * *hint, 0.99 * Y)};
    }

    // imaginary-axis leg: q = y real, same shape as the evanescent integrand
    auto f_left = [&](double y) { return y * y * s.w(pol, {y, 0.0}).imag(); };
    auto left = quadrature::integrate_adaptive(f_left, 0.0, Y, vopt);

    // vertical leg through k_z = K: q = y - iK
    auto f_right = [&](double y) {
        const cplx kz{K, y};
        const cplx g = cplx{0.0, 1.0} * kz * kz * s.w(pol, {y, -K});
        return g.real();
    };
    auto right = quadrature::integrate_adaptive(f_right, 0.0, Y, vopt);

    stats.evaluations += left.evaluations + right.evaluations;
    if (!left.converged) ++stats.unconverged;
    if (!right.converged) ++stats.unconverged;

    return -left.value + right.value;
}

/// Frequencies at which r(w, k=0)^2 e^{2 i a w/c} crosses 1: the gap
/// waveguide cutoffs, where the propagating inner integral has integrable
/// log spikes.  Used as outer panel edges.
inline std::vector<double> corner_mode_frequencies(const Mirror& mirror, double a,
                                                   double omega_max, Polarization pol,
                                                   BranchConvention bc)
{
    std::vector<double> out;
    const double step = std::numbers::pi * constants::c / (16.0 * a);
    auto corner_z = [&](double omega) {
        const Slice s = Slice::make(mirror, omega, a, bc);
        const cplx q{0.0, -omega / constants::c};
        const cplx r = s.refl(pol, q);
        return r * r * std::exp(cplx{0.0, 2.0 * a * omega / constants::c});
    };
    double prev_omega = 0.25 * step;
    cplx prev = corner_z(prev_omega);
    for (double omega = prev_omega + step; omega < omega_max; omega += step) {
        const cplx cur = corner_z(omega);
        // crossing of arg(z) through 0 while z is near the unit circle
        if (prev.imag() * cur.imag() < 0.0 && (prev.real() > 0.0 || cur.real() > 0.0)) {
            double lo = prev_omega, hi = omega;
            double flo = prev.imag();
            for (int it = 0; it < 40; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = corner_z(mid).imag();
                if (fm * flo <= 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    flo = fm;
                }
            }
            const double w0 = 0.5 * (lo + hi);
            if (std::abs(corner_z(w0).real() - 1.0) < 0.5) out.push_back(w0);
        }
        prev = cur;
        prev_omega = omega;
    }
    return out;
}

struct OuterResult {
    double value = 0.0;     // integral of coth(u) * inner(w(u)) du
    double abs_error = 0.0;
    std::int64_t evaluations = 0;
    bool converged = true;
};

/// Shared tail rule for both sector kinds, fed by the masses of the two
/// octave blocks past the nominal cutoff.  Each sector keeps its own blocks:
/// the slowly decaying parts of the two sectors' tails cancel each other per
/// octave (they are the two halves of the same constant-gamma absorption
/// integral split at the light cone), while their sum -- the tail of the
/// total -- dies off by more than an order of magnitude per octave.
/// Collecting both blocks in both sectors therefore leaves the total with a
/// negligible remainder; extrapolating either sector's own tail would
/// instead amplify the non-cancelling artifact part.
inline void apply_tail_blocks(OuterResult& out, double d0, double d1, double block_err)
{
    out.value += d0 + d1;
    out.abs_error += block_err + 0.02 * (std::abs(d0) + std::abs(d1));
}

/// Outer frequency integral for the propagating sectors.  Past the first
/// quarter period the integrand is a quasi-alternating oscillation of period
/// pi c / a in omega whose amplitude grows like omega^2 before the plasma
/// edge; the integral exists as the gamma -> 0+ (Abel) value, which the
/// epsilon-accelerated half-period lobe series evaluates directly.
/// Binomial average of order n ending at partial sum S_J: filters an
/// alternating (per-lobe) component out of the sequence, leaving the
/// oscillation-free running integral at the truncation point.
inline double binomial_filtered(const std::vector<double>& sums, std::size_t J, int n)
{
    double acc = 0.0, coeff = 1.0, norm = 0.0;
    for (int k = 0; k <= n; ++k) {
        acc += coeff * sums[J - n + k];
        norm += coeff;
        coeff *= double(n - k) / double(k + 1);
    }
    return acc / norm;
}

/// Outer frequency integral for the propagating sectors, truncated at u_max
/// like the evanescent one so the sectors' model-artifact tails stay paired.
/// The integrand past the first quarter period is a quasi-alternating
/// oscillation of period pi c / a in omega whose amplitude grows like
/// omega^2 up to the mirror's reflectivity edge; it is integrated in
/// half-period lobes and the truncation-point oscillation is removed with a
/// binomial filter over the partial sums.
template <class Inner>
OuterResult outer_oscillatory(Inner&& inner_of_omega, const Geometry& geom,
                              const LifshitzOptions& opt,
                              const std::vector<double>& omega_breaks, double u_max,
                              double u_abs_anchor, InnerStats& stats)
{
    const double omega_of_u = 2.0 * constants::k_B * geom.T / constants::hbar;
    auto f = [&](double u) {
        const double v = quadrature::coth_half(u) * inner_of_omega(u * omega_of_u);
        stats.max_abs_inner = std::max(stats.max_abs_inner, std::abs(v));
        return v;
    };

    const double half_period_u = (std::numbers::pi * constants::c / (2.0 * geom.a)) / omega_of_u;
    const double u_osc = 0.5 * half_period_u; // quarter period
    const double u_matsubara = std::numbers::pi;

    // lobes run to 4 u_max so the two octave blocks past the nominal cutoff
    // can be measured (see apply_tail_blocks)
    const int filter_order = 8;
    // partial-sum index whose binomial filter window is centred at u
    auto j_at = [&](double u) {
        const int j = static_cast<int>(std::llround((u - u_osc) / half_period_u)) - 1 +
                      filter_order / 2;
        return std::max(filter_order, j);
    };
    const int lobes_needed = j_at(4.0 * u_max) + 1;
    const int max_lobes = std::min(12000, std::max(lobes_needed, filter_order + 2));

    // The lobe values cancel down to the anchor scale, so every tolerance in
    // this pipeline is absolute, referenced to the anchor; a relative
    // criterion on the (much larger) lobe values would stop far too early.
    quadrature::AdaptiveOptions popt;
    popt.rel_tol = 1e-13;
    popt.max_intervals = 1600;
    for (double wb : omega_breaks) popt.breakpoints.push_back(wb / omega_of_u);

    const double lobe_abs =
        0.3 * opt.rel_tol * u_abs_anchor / std::sqrt(std::max(8.0, double(lobes_needed)));

    OuterResult out;

    // smooth head below the first oscillation scale
    {
        std::vector<double> edges{0.0};
        const double lo = std::min(u_matsubara, u_osc);
        edges.push_back(lo / 8.0);
        edges.push_back(lo);
        if (u_osc > 1.02 * lo) edges.push_back(u_osc);
        popt.abs_tol = 0.05 * opt.rel_tol * u_abs_anchor;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            auto r = quadrature::integrate_adaptive(f, edges[i], edges[i + 1], popt);
            out.value += r.value;
            out.abs_error += r.abs_error;
            out.evaluations += r.evaluations;
            out.converged = out.converged && r.converged;
        }
    }

    std::vector<double> partial_sums;
    partial_sums.reserve(max_lobes);
    double direct = out.value;
    double max_lobe = 0.0;
    int decayed = 0;
    int lobes_done = 0;

    for (int j = 0; j < max_lobes; ++j) {
        const double a_u = u_osc + j * half_period_u;
        popt.abs_tol = lobe_abs;
        auto r = quadrature::integrate_adaptive(f, a_u, a_u + half_period_u, popt);
        out.evaluations += r.evaluations;
        out.abs_error += r.abs_error;
        out.converged = out.converged && r.converged;
        direct += r.value;
        max_lobe = std::max(max_lobe, std::abs(r.value));
        partial_sums.push_back(direct);
        lobes_done = j + 1;

        // lobes genuinely dead before the cutoff: plain truncated sum
        if (std::abs(r.value) <=
            0.02 * opt.rel_tol * std::max(std::abs(direct), 0.3 * u_abs_anchor)) {
            if (++decayed >= 2 && j >= filter_order) {
                out.value = direct;
                out.abs_error += std::abs(r.value);
                return out;
            }
        } else {
            decayed = 0;
        }

        if (lobes_done >= lobes_needed) break;
    }

    if (lobes_done <= j_at(u_max) || lobes_done <= filter_order + 1) {
        out.value = direct;
        out.converged = false;
        return out;
    }

    auto filtered_at = [&](double u) {
        const std::size_t J = std::min<std::size_t>(j_at(u), partial_sums.size() - 1);
        return binomial_filtered(partial_sums, J, filter_order);
    };
    const std::size_t J = partial_sums.size() - 1;
    const double f4 = binomial_filtered(partial_sums, J, filter_order);
    const double residual_osc = std::abs(f4 - binomial_filtered(partial_sums, J, filter_order - 2));

    if (lobes_done >= lobes_needed) {
        const double d0 = filtered_at(2.0 * u_max) - filtered_at(u_max);
        const double d1 = f4 - filtered_at(2.0 * u_max);
        out.value = filtered_at(u_max);
        out.abs_error += residual_osc;
        apply_tail_blocks(out, d0, d1, 0.0);
    } else {
        out.value = f4;
        out.abs_error += residual_osc + std::abs(f4 - filtered_at(u_max));
        out.converged = false;
    }
    return out;
}

/// Outer frequency integral for the (non-oscillatory) evanescent sectors in
/// u = hbar w / (2 k_B T), panels aligned with the Matsubara scale u = pi
/// and the cavity scale w = c/(2a), truncated at u_max plus the two octave
/// tail blocks.
template <class Inner>
OuterResult outer_integral(Inner&& inner_of_omega, const Geometry& geom,
                           const LifshitzOptions& opt, double u_max, double u_abs_anchor,
                           const std::vector<double>& omega_breaks, InnerStats& stats)
{
    const double omega_of_u = 2.0 * constants::k_B * geom.T / constants::hbar;
    auto f = [&](double u) {
        const double v = quadrature::coth_half(u) * inner_of_omega(u * omega_of_u);
        stats.max_abs_inner = std::max(stats.max_abs_inner, std::abs(v));
        return v;
    };

    const double u_cavity = 0.5 * constants::hbar * constants::c /
                            (2.0 * geom.a * constants::k_B * geom.T); // u at w = c/(2a)
    const double u_matsubara = std::numbers::pi;

    std::vector<double> edges;
    const double lo = std::min(u_cavity, u_matsubara);
    const double hi = std::max(u_cavity, u_matsubara);
    edges.push_back(0.0);
    edges.push_back(lo / 8.0);
    edges.push_back(lo);
    if (hi > 1.02 * lo) edges.push_back(hi);
    for (double e = 2.0 * hi; e < u_max; e *= 2.0) edges.push_back(e);
    edges.push_back(u_max);
    for (double wb : omega_breaks) {
        const double ub = wb / omega_of_u;
        if (ub > 0.0 && ub < u_max) edges.push_back(ub);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    OuterResult out;
    quadrature::AdaptiveOptions popt;
    popt.rel_tol = std::min(0.3 * opt.rel_tol, 1e-6);
    popt.abs_tol = 0.05 * opt.rel_tol * u_abs_anchor;
    popt.max_intervals = 900;

    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto r = quadrature::integrate_adaptive(f, edges[i], edges[i + 1], popt);
        out.value += r.value;
        out.abs_error += r.abs_error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }

    // octave blocks past the cutoff, same tail rule as the propagating sector
    {
        quadrature::AdaptiveOptions bopt = popt;
        bopt.abs_tol = 0.02 * opt.rel_tol * u_abs_anchor;
        auto b0 = quadrature::integrate_adaptive(f, u_max, 2.0 * u_max, bopt);
        auto b1 = quadrature::integrate_adaptive(f, 2.0 * u_max, 4.0 * u_max, bopt);
        out.evaluations += b0.evaluations + b1.evaluations;
        apply_tail_blocks(out, b0.value, b1.value, b0.abs_error + b1.abs_error);
    }
    return out;
}

inline void validate_pressure_mirror(const Mirror& mirror, const char* what)
{
    if (mirror.is_ideal()) return;
    if (models::is_nonlocal(mirror.model()))
        throw std::domain_error(std::string(what) +
                                ": wavevector-dependent models are outside the unbounded "
                                "k-integration domain");
    if (std::holds_alternative<models::TabulatedPermittivity>(mirror.model()))
        throw std::domain_error(
            std::string(what) +
            ": the sector decomposition needs an analytic permittivity; interpolation kinks "
            "do not cancel in the oscillatory frequency integral");
}

/// Dissipationless mirrors have strictly real reflection coefficients in the
/// evanescent sector, so their evanescent pressure vanishes pointwise -- and
/// their propagating sector is the whole per-polarization pressure.
inline bool dissipationless(const Mirror& mirror)
{
    return mirror.is_ideal() ||
           std::holds_alternative<models::PlasmaParams>(mirror.model());
}

/// Frequency scale above which the mirror's own response structure (the
/// surface-mode region near omega_p/sqrt(2), the reflectivity edge at
/// omega_p) is exhausted.  The sector integrals must reach it even when it
/// exceeds the cavity-scale cutoff.
inline double mirror_uv_omega(const Mirror& mirror)
{
    if (mirror.is_ideal()) return 0.0;
    return std::visit(
        [](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, models::DrudeParams>) return 3.0 * p.omega_p;
            else if constexpr (std::is_same_v<P, models::PlasmaParams>) return 3.0 * p.omega_p;
            else
                return 0.0;
        },
        mirror.model());
}

enum class PolMask { tm_only, te_only, both };

/// Matsubara representation restricted to a polarization subset:
///   P = -(k_B T / pi) sum_l' int q^2 dq sum_pol z/(1-z).
inline QuadratureResult matsubara_sum(const Mirror& mirror, const Geometry& geom,
                                      const LifshitzOptions& opt, PolMask mask)
{
    const double a = geom.a;
    const double xi1 = matsubara_frequency(geom.T);
    const double tol = opt.rel_tol;
    const bool use_tm = mask != PolMask::te_only;
    const bool use_te = mask != PolMask::tm_only;

    quadrature::AdaptiveOptions qopt;
    qopt.rel_tol = 0.1 * tol;
    qopt.decay_scale = 2.0 * a;
    qopt.max_intervals = 600;

    QuadratureResult out;
    double sum = 0.0;
    double quad_err = 0.0;
    bool conv = true;

    auto mode_term = [](double r2, double e) {
        const double z = r2 * e;
        return z / (1.0 - z);
    };

    // l = 0 (half weight): reflection limits depend on the model kind.
    // Drude: r_TM -> 1, r_TE -> 0.  Plasma: r_TM -> 1, finite r_TE.
    {
        auto integrand = [&](double q) -> double {
            const double e = std::exp(-2.0 * a * q);
            double v = 0.0;
            if (use_tm) v += mode_term(1.0, e);
            if (use_te) {
                if (mirror.is_ideal()) {
                    v += mode_term(1.0, e);
                } else if (std::holds_alternative<models::PlasmaParams>(mirror.model())) {
                    const double kappa =
                        std::get<models::PlasmaParams>(mirror.model()).omega_p / constants::c;
                    const double q1 = std::sqrt(q * q + kappa * kappa);
                    const double rte = (q - q1) / (q + q1);
                    v += mode_term(rte * rte, e);
                }
                // Drude-type: r_TE(0, k) = 0 contributes nothing
            }
            return q * q * v;
        };
        auto r = quadrature::integrate_adaptive(integrand, 0.0,
                                                std::numeric_limits<double>::infinity(), qopt);
        sum += 0.5 * r.value;
        quad_err += 0.5 * r.abs_error;
        out.evaluations += r.evaluations;
        conv = conv && r.converged;
    }

    double prev_term = 0.0;
    double rho = 0.5; // smoothed term ratio; near 1 at low temperature
    for (int l = 1; l <= 400000; ++l) {
        const double xi = xi1 * l;
        const double eps_l =
            mirror.is_ideal() ? 0.0 : models::permittivity_imag_axis(mirror.model(), xi);
        const double xic = xi / constants::c;
        auto integrand = [&](double q) -> double {
            const double e = std::exp(-2.0 * a * q);
            double v = 0.0;
            if (mirror.is_ideal()) {
                if (use_tm) v += mode_term(1.0, e);
                if (use_te) v += mode_term(1.0, e);
            } else {
                const double q1 = std::sqrt(q * q + (eps_l - 1.0) * xic * xic);
                if (use_tm) {
                    const double rtm = (eps_l * q - q1) / (eps_l * q + q1);
                    v += mode_term(rtm * rtm, e);
                }
                if (use_te) {
                    const double rte = (q - q1) / (q + q1);
                    v += mode_term(rte * rte, e);
                }
            }
            return q * q * v;
        };
        auto r = quadrature::integrate_adaptive(integrand, xic,
                                                std::numeric_limits<double>::infinity(), qopt);
        sum += r.value;
        quad_err += r.abs_error;
        out.evaluations += r.evaluations;
        conv = conv && r.converged;

        // truncate on the geometric tail estimate, not the bare term: at low
        // temperature the term ratio approaches 1 and the tail dwarfs the
        // last term by orders of magnitude
        if (l >= 3 && prev_term > 0.0) {
            rho = 0.5 * rho + 0.5 * std::min(std::abs(r.value) / prev_term, 0.9995);
            const double tail = r.value * rho / (1.0 - rho);
            if (std::abs(tail) <= 0.25 * tol * std::abs(sum)) {
                sum += tail;
                quad_err += 0.5 * std::abs(tail);
                break;
            }
        }
        prev_term = std::abs(r.value);
    }

    const double prefactor = -constants::k_B * geom.T / std::numbers::pi;
    out.value = prefactor * sum;
    out.abs_error = std::abs(prefactor) * quad_err;
    out.converged = conv;
    return out;
}

} // namespace detail

/// One sector of the real-frequency-axis decomposition, in Pa.
inline QuadratureResult pressure_sector(Polarization pol, Sector sector, const Mirror& mirror,
                                        const Geometry& geom, const LifshitzOptions& opt = {})
{
    validate(geom);
    detail::validate_pressure_mirror(mirror, "pressure_sector");

    // Dissipationless mirrors: the evanescent integrand is pointwise zero
    // (r real, q real), so the propagating sector carries the entire
    // per-polarization pressure.  The gamma = 0 real-axis propagating
    // integrand is only a regularized (order-of-limits) object -- its
    // pointwise frequency integral has a secular, non-decaying mean -- so
    // the sector is evaluated through the per-polarization imaginary-axis
    // representation, which is what the identity P_pol = P_pol^prop means.
    if (sector == Sector::propagating && detail::dissipationless(mirror)) {
        return detail::matsubara_sum(mirror, geom, opt,
                                     pol == Polarization::tm ? detail::PolMask::tm_only
                                                             : detail::PolMask::te_only);
    }

    detail::InnerStats stats;
    const double inner_rel = 1e-13; // inner stops on the absolute floors below
    const double omega_of_u = 2.0 * constants::k_B * geom.T / constants::hbar;
    const double u_cavity = (constants::c / (2.0 * geom.a)) / omega_of_u;
    const double omega_uv = detail::mirror_uv_omega(mirror);
    const double u_max =
        std::max({opt.omega_cut_factor * u_cavity, omega_uv / omega_of_u, 10.0});
    const double hp_u = (std::numbers::pi * constants::c / (2.0 * geom.a)) / omega_of_u;

    // Absolute tolerance anchor: the sectors cancel pairwise down to the
    // total, whose magnitude is bracketed by the ideal zero-temperature and
    // classical limits.  Tolerances reference this analytic scale so the
    // cancellation never eats the error budget.
    const double prefactor = -constants::k_B * geom.T / (std::numbers::pi * std::numbers::pi);
    const double p_anchor = std::max(
        std::numbers::pi * std::numbers::pi * constants::hbar * constants::c /
            (240.0 * geom.a * geom.a * geom.a * geom.a),
        constants::zeta3 * constants::k_B * geom.T /
            (4.0 * std::numbers::pi * geom.a * geom.a * geom.a));
    const double u_anchor = p_anchor / std::abs(prefactor);

    // inner absolute floors, density-matched to the outer budgets
    // (mirrors the lobe_abs formula in outer_oscillatory)
    double inner_abs;
    if (sector == Sector::propagating) {
        const double n_lobes = std::max(8.0, (u_max - 0.5 * hp_u) / hp_u + 9.0);
        const double lobe_abs = 0.3 * opt.rel_tol * u_anchor / std::sqrt(n_lobes);
        inner_abs = 0.3 * lobe_abs / hp_u;
    } else {
        inner_abs = 0.01 * opt.rel_tol * u_anchor;
    }

    std::vector<double> breaks;

    auto inner = [&](double omega) -> double {
        const detail::Slice s = detail::Slice::make(mirror, omega, geom.a, opt.branch);
        if (sector == Sector::evanescent)
            return detail::inner_evanescent(s, pol, inner_rel, inner_abs, stats);
        return detail::inner_propagating(s, pol, inner_rel, inner_abs, stats);
    };

    detail::OuterResult outer;
    if (sector == Sector::propagating) {
        const double omega_scan = (4.0 * u_max + 10.0 * hp_u) * omega_of_u;
        breaks = detail::corner_mode_frequencies(mirror, geom.a, omega_scan, pol, opt.branch);
        outer = detail::outer_oscillatory(inner, geom, opt, breaks, u_max, u_anchor, stats);
    } else {
        // the surface-mode region sits at fixed frequency, not at the cavity scale
        if (omega_uv > 0.0)
            breaks = {omega_uv / 3.0 / std::sqrt(2.0), omega_uv / 3.0};
        outer = detail::outer_integral(inner, geom, opt, u_max, u_anchor, breaks, stats);
    }

    QuadratureResult out;
    out.value = prefactor * outer.value;
    out.abs_error = std::abs(prefactor) *
                    (outer.abs_error + 2.0 * inner_rel * std::abs(outer.value));
    out.evaluations = outer.evaluations + stats.evaluations;
    out.converged = outer.converged && stats.unconverged == 0;
    return out;
}

/// All four sectors (evaluated concurrently) and their sum.
inline PressureBreakdown pressure_breakdown(const Mirror& mirror, const Geometry& geom,
                                            const LifshitzOptions& opt = {})
{
    validate(geom);
    detail::validate_pressure_mirror(mirror, "pressure_breakdown");

    PressureBreakdown out;
    QuadratureResult* slots[4] = {&out.tm_prop, &out.te_prop, &out.tm_evan, &out.te_evan};
    const Polarization pols[4] = {Polarization::tm, Polarization::te, Polarization::tm,
                                  Polarization::te};
    const Sector sectors[4] = {Sector::propagating, Sector::propagating, Sector::evanescent,
                               Sector::evanescent};
    par::parallel_for(4, [&](int i) { *slots[i] = pressure_sector(pols[i], sectors[i], mirror, geom, opt); });

    out.total = out.tm_prop.value + out.te_prop.value + out.tm_evan.value + out.te_evan.value;
    double sq = 0.0;
    bool conv = true;
    for (auto* s : slots) {
        sq += s->abs_error * s->abs_error;
        conv = conv && s->converged;
    }
    out.total_abs_error = std::sqrt(sq);
    out.converged = conv;
    return out;
}

/// Imaginary-frequency (Matsubara) representation of the same pressure:
///   P = -(k_B T / pi) sum_l' int q^2 dq sum_pol z/(1-z),  z = r^2 e^{-2 a q},
/// the l = 0 term entering with half weight through its analytic limits.
inline QuadratureResult pressure_matsubara(const Mirror& mirror, const Geometry& geom,
                                           const LifshitzOptions& opt = {})
{
    validate(geom);
    detail::validate_pressure_mirror(mirror, "pressure_matsubara");
    return detail::matsubara_sum(mirror, geom, opt, detail::PolMask::both);
}

enum class ClassicalKind { drude, plasma, ideal };

/// Large-separation (classical) limit: -zeta(3) k_B T / (8 pi a^3) for the
/// Drude model and twice that for plasma or ideal mirrors.
inline double classical_limit(ClassicalKind kind, const Geometry& geom)
{
    validate(geom);
    const double base = -constants::zeta3 * constants::k_B * geom.T /
                        (8.0 * std::numbers::pi * geom.a * geom.a * geom.a);
    return kind == ClassicalKind::drude ? base : 2.0 * base;
}

} // namespace casimir::lifshitz
