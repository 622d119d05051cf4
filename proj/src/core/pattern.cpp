#include "core/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "core/error.hpp"

namespace cellplan {

double ideal_array_gain(int n_elements, double phi) {
    if (n_elements < 2)
        raise(errc::invalid_argument, "array needs at least 2 elements");
    const double x = 0.5 * n_elements * kPi * std::cos(phi);
    if (std::abs(x) < 1e-12)
        return 1.0;
    return std::abs(std::sin(x) / x);
}

double laplacian_pas(double sigma, double phi0, double phi) {
    if (sigma <= 0.0)
        raise(errc::invalid_argument, "angular spread must be positive");
    const double d = std::abs(wrap_pi(phi - phi0));
    const double rt2 = std::sqrt(2.0);
    return (1.0 / (rt2 * sigma)) * std::exp(-rt2 * d / sigma);
}

SampledPattern make_ideal_pattern(const ArraySpec& spec) {
    if (spec.n_elements < 2)
        raise(errc::invalid_argument, "array needs at least 2 elements");
    if (spec.n_samples < 16)
        raise(errc::invalid_argument, "pattern needs at least 16 samples");
    SampledPattern p;
    p.kind = PatternKind::ideal;
    p.gains.resize(static_cast<std::size_t>(spec.n_samples));
    const double step = kPi / spec.n_samples;
    for (std::size_t i = 0; i < p.gains.size(); ++i)
        p.gains[i] = ideal_array_gain(spec.n_elements, static_cast<double>(i) * step);
    return p;
}

SampledPattern spread_pattern(const SampledPattern& ideal, const PasSpec& pas) {
    if (ideal.gains.empty())
        raise(errc::invalid_argument, "empty pattern");
    if (pas.sigma_rad < 0.0)
        raise(errc::invalid_argument, "angular spread must be non-negative");

    const std::size_t m = ideal.size();
    const double step = ideal.step();

    SampledPattern out;
    out.kind = PatternKind::real;

    // A spread narrower than one sample is indistinguishable from a delta.
    if (pas.sigma_rad <= step) {
        out.gains = ideal.gains;
        return out;
    }
    if (pas.sigma_rad < 8.0 * step) {
        char buf[192];
        std::snprintf(buf, sizeof buf,
                      "angular spread %.6g rad is under-resolved: sample step %.6g rad, "
                      "need step <= %.6g rad (>= %ld samples)",
                      pas.sigma_rad, step, pas.sigma_rad / 8.0,
                      static_cast<long>(std::ceil(8.0 * kPi / pas.sigma_rad)));
        raise(errc::domain, buf);
    }

    // Even extension onto [0, 2*pi): mirror the half-domain so the circular
    // wrap sees a continuous curve at both seams.
    const std::size_t n = 2 * m;
    std::vector<double> ext(n);
    for (std::size_t j = 0; j < m; ++j)
        ext[j] = ideal.gains[j];
    for (std::size_t j = m; j < n; ++j)
        ext[j] = ideal.gains[n - 1 - j];

    // Laplacian kernel on the wrapped offsets, renormalized so the discrete
    // convolution preserves total power.
    std::vector<double> ker(n);
    double ksum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double off = static_cast<double>(j) * step;
        if (off > kPi)
            off -= kTwoPi;
        ker[j] = laplacian_pas(pas.sigma_rad, pas.mean_az_rad, off);
        ksum += ker[j];
    }
    for (std::size_t j = 0; j < n; ++j)
        ker[j] /= ksum;

    // Direct summation in fixed order keeps results bit-identical run to run.
    std::vector<double> conv(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t src = (i + n - j) % n;
            acc += ker[j] * ext[src];
        }
        conv[i] = acc;
    }

    out.gains.assign(conv.begin(), conv.begin() + static_cast<long>(m));
    return out;
}

double erp_gain(const ErpFit& fit, double phi) {
    const double d = angular_distance(phi, fit.pointing_rad);
    if (d <= 0.5 * fit.bw_rad)
        return 1.0;
    return std::pow(10.0, -fit.sll_db / 10.0);
}

double sampled_gain(const SampledPattern& pattern, double boresight_offset_rad) {
    if (pattern.gains.empty())
        raise(errc::invalid_argument, "empty pattern");
    double a = 0.5 * kPi + wrap_pi(boresight_offset_rad); // (-pi/2, 3*pi/2]
    if (a < 0.0)
        a = -a;
    if (a > kPi)
        a = kTwoPi - a;
    const std::size_t m = pattern.size();
    std::size_t i = static_cast<std::size_t>(std::lround(a / pattern.step()));
    if (i >= m)
        i = 2 * m - 1 - i; // reflect across the pi edge
    return pattern.gains[i];
}

namespace {

// L1 distance between the step pattern and the normalized input, with the
// window membership precomputed as distances from the pointing direction.
struct StepCost {
    const std::vector<double>* g;
    const std::vector<double>* dist;
    double step;

    double operator()(double bw, double sll) const {
        const double half = 0.5 * bw;
        const double c = std::pow(10.0, -sll / 10.0);
        double acc = 0.0;
        const std::size_t m = g->size();
        for (std::size_t i = 0; i < m; ++i) {
            const double gi = (*g)[i];
            acc += ((*dist)[i] <= half) ? std::abs(1.0 - gi) : std::abs(c - gi);
        }
        return acc * step;
    }
};

// Minimizes f on [lo, hi]; folds every evaluated point, endpoints included,
// into the running best so refinement can only improve on the grid answer.
template <typename F>
void golden_refine(F f, double lo, double hi, double& best_x, double& best_f) {
    auto consider = [&](double x, double fx) {
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    };
    consider(lo, f(lo));
    consider(hi, f(hi));
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - r * (b - a);
    double x2 = a + r * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    consider(x1, f1);
    consider(x2, f2);
    for (int it = 0; it < 200 && (b - a) > 1e-10; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
            consider(x1, f1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
            consider(x2, f2);
        }
    }
}

} // namespace

ErpFit fit_erp(const SampledPattern& real, double floor_db, int bw_steps, int sll_steps) {
    if (real.gains.empty())
        raise(errc::invalid_argument, "empty pattern");
    if (!(floor_db < 0.0))
        raise(errc::invalid_argument, "sidelobe search floor must be negative (dB)");
    if (bw_steps < 1 || sll_steps < 1)
        raise(errc::invalid_argument, "fit grid needs at least one step per axis");

    const std::size_t m = real.size();
    const double step = real.step();

    // Normalize to unit peak.
    double gmax = real.gains[0];
    std::size_t imax = 0;
    for (std::size_t i = 1; i < m; ++i) {
        if (real.gains[i] > gmax) {
            gmax = real.gains[i];
            imax = i;
        }
    }
    if (gmax <= 0.0)
        raise(errc::invalid_argument, "pattern has no positive gain");
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i)
        g[i] = real.gains[i] / gmax;

    // Pointing: midpoint of the contiguous plateau of peak samples.
    std::size_t lo = imax, hi = imax;
    while (lo > 0 && g[lo - 1] == g[imax])
        --lo;
    while (hi + 1 < m && g[hi + 1] == g[imax])
        ++hi;
    const double pointing = 0.5 * static_cast<double>(lo + hi) * step;

    std::vector<double> dist(m);
    for (std::size_t i = 0; i < m; ++i)
        dist[i] = angular_distance(static_cast<double>(i) * step, pointing);

    const StepCost cost{&g, &dist, step};

    const double smax = -floor_db;
    const double dbw = kPi / (bw_steps + 1);
    const double dsll = smax / (sll_steps + 1);

    double best_bw = dbw, best_sll = dsll;
    double best_f = cost(best_bw, best_sll);
    for (int j = 0; j < bw_steps; ++j) {
        const double bw = (j + 1) * dbw;
        for (int k = 0; k < sll_steps; ++k) {
            const double sll = (k + 1) * dsll;
            const double f = cost(bw, sll);
            if (f < best_f) {
                best_f = f;
                best_bw = bw;
                best_sll = sll;
            }
        }
    }

    // Polish one axis at a time inside the bracketing grid cells.
    {
        const double blo = std::max(best_bw - dbw, 1e-9);
        const double bhi = std::min(best_bw + dbw, kPi);
        const double s = best_sll;
        golden_refine([&](double bw) { return cost(bw, s); }, blo, bhi, best_bw, best_f);
    }
    {
        const double slo = std::max(best_sll - dsll, 1e-9);
        const double shi = std::min(best_sll + dsll, smax);
        const double bw = best_bw;
        golden_refine([&](double sll) { return cost(bw, sll); }, slo, shi, best_sll, best_f);
    }

    ErpFit fit;
    fit.bw_rad = best_bw;
    fit.sll_db = best_sll;
    fit.pointing_rad = pointing;
    fit.residual = best_f;
    return fit;
}

} // namespace cellplan
