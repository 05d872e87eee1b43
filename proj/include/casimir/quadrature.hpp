#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "casimir/bessel.hpp"

// Adaptive quadrature built on the 15-point Gauss-Kronrod pair, with an
// exponential map for semi-infinite ranges (the caller supplies the physical
// decay scale, it is never guessed) and sqrt endpoint transforms for
// integrable algebraic singularities.  Complex integrands share one
// subdivision, refined against the modulus of the combined error.
//
// integrate_oscillatory() partitions a Bessel or complex-exponential
// integrand at the zeros of the oscillating factor, integrates each lobe
// adaptively and accelerates the resulting alternating series with Wynn's
// epsilon algorithm.

namespace casimir::quadrature {

template <class T>
struct BasicQuadratureResult {
    T value{};
    double abs_error = 0.0;
    std::int64_t evaluations = 0;
    bool converged = false;
};

using QuadratureResult = BasicQuadratureResult<double>;
using ComplexQuadratureResult = BasicQuadratureResult<std::complex<double>>;

enum class EndpointTransform { none, sqrt_lower, sqrt_upper };

struct AdaptiveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 2000;
    EndpointTransform endpoint = EndpointTransform::none;
    /// Exponential decay rate of the integrand; required for an infinite
    /// upper limit, ignored otherwise.
    double decay_scale = 0.0;
    /// Interior points the subdivision must start from (refinement hints),
    /// in the same coordinates as the integration limits.
    std::vector<double> breakpoints{};
};

namespace detail {

// 15-point Kronrod nodes with the embedded 7-point Gauss rule (QUADPACK dqk15).
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double gk_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double gauss_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class T>
struct PanelEstimate {
    T value{};
    double error = 0.0;
};

// One Gauss-Kronrod pass over [a, b] with the QUADPACK error heuristic.
template <class F, class T>
PanelEstimate<T> gk15(F& f, double a, double b)
{
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    T fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - half * gk_nodes[i]);
        fv[14 - i] = f(mid + half * gk_nodes[i]);
    }
    fv[7] = f(mid);

    T resk{};
    T resg{};
    double resabs = 0.0;
    for (int i = 0; i < 7; ++i) {
        resk += gk_weights[i] * (fv[i] + fv[14 - i]);
        resabs += gk_weights[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    }
    resk += gk_weights[7] * fv[7];
    resabs += gk_weights[7] * std::abs(fv[7]);
    for (int i = 0; i < 3; ++i)
        resg += gauss_weights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    resg += gauss_weights[3] * fv[7];

    const T reskh = resk * 0.5;
    double resasc = gk_weights[7] * std::abs(fv[7] - reskh);
    for (int i = 0; i < 7; ++i)
        resasc += gk_weights[i] * (std::abs(fv[i] - reskh) + std::abs(fv[14 - i] - reskh));

    const double ahalf = std::abs(half);
    resabs *= ahalf;
    resasc *= ahalf;

    double err = std::abs(resk - resg) * ahalf;
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50)
        err = std::max(eps50 * resabs, err);

    return {resk * half, err};
}

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
};

template <class T>
struct SegmentWorse {
    bool operator()(const Segment<T>& x, const Segment<T>& y) const { return x.error < y.error; }
};

// Worst-first refinement over pre-seeded segments of a finite interval.
template <class F, class T = std::invoke_result_t<F&, double>>
BasicQuadratureResult<T> refine(F& f, const std::vector<double>& edges, double rel_tol,
                                double abs_tol, int max_intervals)
{
    std::priority_queue<Segment<T>, std::vector<Segment<T>>, SegmentWorse<T>> heap;
    T total{};
    double total_err = 0.0;
    std::int64_t evals = 0;
    int n_seg = 0;

    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i] == edges[i + 1]) continue;
        auto est = gk15<F, T>(f, edges[i], edges[i + 1]);
        evals += 15;
        ++n_seg;
        total += est.value;
        total_err += est.error;
        heap.push({edges[i], edges[i + 1], est.value, est.error});
    }

    auto tolerance = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };

    while (total_err > tolerance() && n_seg < max_intervals && !heap.empty()) {
        Segment<T> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break; // at floating-point resolution
        auto left = gk15<F, T>(f, worst.a, mid);
        auto right = gk15<F, T>(f, mid, worst.b);
        evals += 30;
        ++n_seg;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
    }

    BasicQuadratureResult<T> out;
    out.value = total;
    out.abs_error = total_err;
    out.evaluations = evals;
    out.converged = total_err <= tolerance();
    return out;
}

} // namespace detail

/// Adaptive integration of f over [a, b]; b may be +infinity, in which case
/// options.decay_scale must carry the integrand's exponential decay rate.
/// Runs out of subdivisions -> returns an unconverged result, not an error.
template <class F, class T = std::invoke_result_t<F&, double>>
BasicQuadratureResult<T> integrate_adaptive(F&& f, double a, double b,
                                            const AdaptiveOptions& opt = {})
{
    const bool infinite = std::isinf(b);
    if (!infinite && !(a < b)) throw std::invalid_argument("integrate_adaptive: empty interval");

    auto seed_edges = [&](double ta, double tb, auto&& to_t) {
        std::vector<double> edges{ta};
        for (double x : opt.breakpoints) {
            const double t = to_t(x);
            if (t > ta && t < tb) edges.push_back(t);
        }
        edges.push_back(tb);
        std::sort(edges.begin(), edges.end());
        return edges;
    };

    if (infinite) {
        if (!(opt.decay_scale > 0.0))
            throw std::invalid_argument(
                "integrate_adaptive: infinite range requires a positive decay_scale");
        const double lam = opt.decay_scale;
        auto g = [&f, a, lam](double t) -> std::invoke_result_t<F&, double> {
            const double u = 1.0 - t;
            if (u <= 1e-300) return {}; // integrand must decay; the endpoint contributes nothing
            const double x = a - std::log(u) / lam;
            return f(x) / (lam * u);
        };
        auto edges = seed_edges(0.0, 1.0, [&](double x) { return -std::expm1(-lam * (x - a)); });
        return detail::refine(g, edges, opt.rel_tol, opt.abs_tol, opt.max_intervals);
    }

    switch (opt.endpoint) {
    case EndpointTransform::sqrt_lower: {
        const double w = b - a;
        auto g = [&f, a, w](double s) { return f(a + w * s * s) * 2.0 * w * s; };
        auto edges = seed_edges(0.0, 1.0, [&](double x) { return std::sqrt((x - a) / w); });
        return detail::refine(g, edges, opt.rel_tol, opt.abs_tol, opt.max_intervals);
    }
    case EndpointTransform::sqrt_upper: {
        const double w = b - a;
        auto g = [&f, b, w](double s) { return f(b - w * s * s) * 2.0 * w * s; };
        auto edges = seed_edges(0.0, 1.0, [&](double x) { return std::sqrt((b - x) / w); });
        return detail::refine(g, edges, opt.rel_tol, opt.abs_tol, opt.max_intervals);
    }
    case EndpointTransform::none:
    default: {
        auto g = [&f](double x) { return f(x); };
        auto edges = seed_edges(a, b, [](double x) { return x; });
        return detail::refine(g, edges, opt.rel_tol, opt.abs_tol, opt.max_intervals);
    }
    }
}

struct OscillationSpec {
    enum class Kind { none, bessel_j1, complex_exponential };
    Kind kind = Kind::none;
    /// bessel_j1: the x in J1(k x); complex_exponential: phase rate of e^{i rate k}.
    double scale = 0.0;
    /// Envelope decay rate, used for the truncation cutoff.
    double decay_scale = 0.0;
};

namespace detail {

// Wynn's epsilon table over the partial sums seen so far.  Returns the last
// even-column estimate together with the spread of the two highest even
// columns, which serves as the acceleration error measure.
template <class T>
struct EpsilonEstimate {
    T value{};
    double spread = std::numeric_limits<double>::infinity();
    bool valid = false;
};

template <class T>
EpsilonEstimate<T> epsilon_extrapolate(const std::vector<T>& sums)
{
    const std::size_t n = sums.size();
    if (n < 3) return {};
    std::vector<T> prev(n, T{}); // column k-1
    std::vector<T> cur(sums);    // column k
    EpsilonEstimate<T> best;
    best.value = cur.back();
    best.spread = std::numeric_limits<double>::infinity();
    int column = 0;
    while (cur.size() > 1 && column < 40) {
        std::vector<T> next(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            const T d = cur[i + 1] - cur[i];
            if (std::abs(d) < 1e-300) return best; // series already exact
            next[i] = prev[i + 1] + T(1.0) / d;
        }
        prev = std::move(cur);
        cur = std::move(next);
        ++column;
        if (column % 2 == 0 && !cur.empty()) {
            const T estimate = cur.back();
            if (!(std::abs(estimate) < std::numeric_limits<double>::max())) return best;
            const double spread = std::abs(estimate - best.value);
            best = {estimate, spread, true};
        }
    }
    return best;
}

struct LobeBoundaries {
    OscillationSpec::Kind kind;
    double scale;
    double lower;
    int index = 0;

    double next()
    {
        if (kind == OscillationSpec::Kind::bessel_j1) {
            for (;;) {
                const double z = bessel::j1_zero(++index) / scale;
                if (z > lower) return z;
            }
        }
        // complex exponential: half-period panels
        ++index;
        return lower + index * std::numbers::pi / scale;
    }
};

} // namespace detail

/// Integrate an oscillatory integrand (smooth envelope times a J1 or
/// complex-exponential factor) from `lower` upward.  The semi-infinite tail
/// is handled as a lobe series accelerated with the epsilon algorithm; a
/// finite `upper` switches to a plain lobe-by-lobe sum.  A non-alternating
/// tail falls back to direct summation down to the decay cutoff, which shows
/// up as a larger reported error.
template <class F, class T = std::invoke_result_t<F&, double>>
BasicQuadratureResult<T> integrate_oscillatory(F&& f, const OscillationSpec& osc, double lower,
                                               double rel_tol,
                                               double upper = std::numeric_limits<double>::infinity())
{
    if (osc.kind == OscillationSpec::Kind::none)
        throw std::invalid_argument("integrate_oscillatory: oscillation kind must be set");
    if (!(osc.scale > 0.0))
        throw std::invalid_argument("integrate_oscillatory: oscillation scale must be positive");

    const bool finite_upper = !std::isinf(upper);
    const int max_lobes = 600;

    detail::LobeBoundaries bounds{osc.kind, osc.scale, lower};

    BasicQuadratureResult<T> out;
    T direct_sum{};
    double quad_err = 0.0;
    bool all_lobes_converged = true;
    double max_lobe = 0.0;

    std::vector<T> partial_sums;
    partial_sums.reserve(64);

    AdaptiveOptions lobe_opt;
    lobe_opt.rel_tol = std::max(0.1 * rel_tol, 1e-13);
    lobe_opt.max_intervals = 200;

    detail::EpsilonEstimate<T> accel;
    double accel_prev_spread = std::numeric_limits<double>::infinity();
    int stable_count = 0;

    double left = lower;
    for (int lobe = 0; lobe < max_lobes; ++lobe) {
        double right = bounds.next();
        bool clipped = false;
        if (finite_upper && right >= upper) {
            right = upper;
            clipped = true;
        }
        if (right > left) {
            lobe_opt.abs_tol = 0.05 * rel_tol * std::max(max_lobe, std::abs(direct_sum));
            auto piece = integrate_adaptive(f, left, right, lobe_opt);
            out.evaluations += piece.evaluations;
            quad_err += piece.abs_error;
            all_lobes_converged = all_lobes_converged && piece.converged;
            direct_sum += piece.value;
            max_lobe = std::max(max_lobe, std::abs(piece.value));
            partial_sums.push_back(direct_sum);

            // decayed below everything relevant: the series is finished
            const double floor =
                std::max(1e-16 * max_lobe, 0.01 * rel_tol * std::abs(direct_sum));
            if (!clipped && lobe > 1 && std::abs(piece.value) <= floor) {
                out.value = direct_sum;
                out.abs_error = quad_err + std::abs(piece.value);
                out.converged = all_lobes_converged &&
                                out.abs_error <= std::max(rel_tol * std::abs(out.value),
                                                          0.1 * rel_tol * max_lobe);
                return out;
            }
        }
        left = right;

        if (clipped) {
            out.value = direct_sum;
            out.abs_error = quad_err;
            out.converged = all_lobes_converged;
            return out;
        }

        if (partial_sums.size() >= 4) {
            // keep the extrapolation window bounded
            std::vector<T> window(partial_sums.end() - std::min<std::size_t>(partial_sums.size(), 30),
                                  partial_sums.end());
            auto est = detail::epsilon_extrapolate(window);
            if (est.valid) {
                const double tol_here = 0.25 * rel_tol * std::max(std::abs(est.value), max_lobe * 1e-3);
                if (est.spread <= tol_here && accel_prev_spread <= tol_here)
                    ++stable_count;
                else
                    stable_count = 0;
                accel = est;
                accel_prev_spread = est.spread;
                if (stable_count >= 1) {
                    out.value = est.value;
                    out.abs_error = quad_err + est.spread;
                    out.converged = all_lobes_converged &&
                                    out.abs_error <= std::max(rel_tol * std::abs(out.value),
                                                              rel_tol * max_lobe * 1e-2);
                    return out;
                }
            }
        }
    }

    // lobe budget exhausted; report the best estimate, honestly unconverged
    out.value = accel.valid ? accel.value : direct_sum;
    out.abs_error = quad_err + (accel.valid ? accel.spread : max_lobe);
    out.converged = false;
    return out;
}

/// coth(x) for x > 0 without cancellation: 1 + 2/(e^{2x} - 1) above 1e-3 and
/// the Laurent expansion 1/x + x/3 - x^3/45 below.
inline double coth_half(double x)
{
    if (!(x > 0.0)) throw std::domain_error("coth_half: requires x > 0");
    if (x > 1e-3) return 1.0 + 2.0 / std::expm1(2.0 * x);
    return 1.0 / x + x / 3.0 - x * x * x / 45.0;
}

template <class T>
struct RichardsonResult {
    T limit{};
    double abs_error = 0.0;
    bool converged = false;
    int steps = 0;
};

/// Limit of f(x) as x -> 0+ by Richardson extrapolation over the geometric
/// sequence x0 * ratio^j, assuming an expansion in integer powers of x.
/// `abs_scale` sets the absolute resolution below which the diagonal is
/// considered settled.
template <class F, class T = std::invoke_result_t<F&, double>>
RichardsonResult<T> richardson_limit(F&& f, double x0, double ratio = 0.5, int max_steps = 22,
                                     double rel_tol = 1e-10, double abs_scale = 0.0)
{
    if (!(x0 > 0.0) || !(ratio > 0.0) || !(ratio < 1.0))
        throw std::invalid_argument("richardson_limit: require x0 > 0 and ratio in (0,1)");

    std::vector<T> row;     // current table row
    RichardsonResult<T> out;
    T prev_diag{};
    double x = x0;
    for (int j = 0; j < max_steps; ++j, x *= ratio) {
        std::vector<T> next(row.size() + 1);
        next[0] = f(x);
        double pm = 1.0;
        for (std::size_t m = 1; m < next.size(); ++m) {
            pm *= 1.0 / ratio; // ratio^{-m}
            next[m] = next[m - 1] + (next[m - 1] - row[m - 1]) / (pm - 1.0);
        }
        row = std::move(next);
        const T diag = row.back();
        out.steps = j + 1;
        if (j > 0) {
            const double change = std::abs(diag - prev_diag);
            out.limit = diag;
            out.abs_error = change;
            if (change <= std::max(rel_tol * std::abs(diag), 1e-12 * abs_scale)) {
                out.converged = true;
                return out;
            }
        }
        prev_diag = diag;
    }
    out.limit = prev_diag;
    return out;
}

} // namespace casimir::quadrature
