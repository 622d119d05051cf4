#pragma once

#include <cstddef>
#include <vector>

#include "core/units.hpp"

namespace cellplan {

enum class PatternKind { ideal, real };

// Azimuth gain curve sampled uniformly on [0, pi). Gains are linear power
// gains relative to peak; sample i sits at angle i * step().
struct SampledPattern {
    PatternKind kind = PatternKind::ideal;
    std::vector<double> gains;

    double step() const { return kPi / static_cast<double>(gains.size()); }
    double angle(std::size_t i) const { return static_cast<double>(i) * step(); }
    std::size_t size() const { return gains.size(); }
};

struct ArraySpec {
    int n_elements = 320;
    int n_samples = 2048;
};

// Power azimuth spectrum of the scattering environment: Laplacian with
// scale sigma (the angular spread) centered on mean_az.
struct PasSpec {
    double sigma_rad = 0.0;
    double mean_az_rad = 0.0;
};

// Two-level step approximation of a real pattern: unit gain across an
// effective beamwidth, constant suppressed gain elsewhere.
struct ErpFit {
    double bw_rad = 0.0;       // effective beamwidth
    double sll_db = 0.0;       // sidelobe suppression magnitude, > 0
    double pointing_rad = 0.0; // mainlobe center
    double residual = 0.0;     // L1 cost of the returned parameters
};

// Uniform linear array gain |sin(x)/x| with x = (N/2)*pi*cos(phi).
// The broadside limit (cos phi = 0) evaluates to 1.
double ideal_array_gain(int n_elements, double phi);

// Laplacian PAS density at phi: (1/(sqrt(2)*sigma)) * exp(-sqrt(2)*|d|/sigma)
// where d is the wrapped angular distance phi - phi0.
double laplacian_pas(double sigma, double phi0, double phi);

SampledPattern make_ideal_pattern(const ArraySpec& spec);

// Circular convolution of the ideal pattern with the renormalized Laplacian
// kernel. The half-domain [0, pi) is evenly extended to the full circle for
// the wrap. Sigma at or below one sampling step returns the input unchanged
// (delta kernel); sigma between one step and eight steps is rejected so the
// kernel is always resolved.
SampledPattern spread_pattern(const SampledPattern& ideal, const PasSpec& pas);

// Step-pattern gain: 1 on the closed mainlobe interval, 10^(-sll/10) outside.
// Interval membership uses wrapped angular distance, so fits apply on the
// full circle as well as the sampled half-domain.
double erp_gain(const ErpFit& fit, double phi);

// Nearest-sample lookup of a pattern's gain at an offset from boresight.
// The offset is wrapped onto the circle and folded through the pattern's
// even symmetry about broadside (pi/2 in the sampled domain).
double sampled_gain(const SampledPattern& pattern, double boresight_offset_rad);

// Fits (BW, SLL) minimizing the L1 distance between the step pattern and the
// peak-normalized input, BW in (0, pi), suppression in (0, -floor_db).
// Exhaustive grid first, then golden-section refinement per axis; the
// returned residual is never worse than any grid candidate's.
// floor_db is the sidelobe search floor and must be negative.
ErpFit fit_erp(const SampledPattern& real, double floor_db,
               int bw_steps = 180, int sll_steps = 200);

} // namespace cellplan
