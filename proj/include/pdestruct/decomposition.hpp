#pragma once

#include "pdestruct/function_model.hpp"

#include <vector>

namespace pdestruct {

/// Sample points for a profile over the range of k x - y on the grid.
///
/// When k dx / dy is a ratio of small integers, the node values of k x - y
/// lie on a uniform lattice; the lattice (refined by an integer factor until
/// it has at least `min_samples` points) is returned so that grid nodes hit
/// profile samples exactly. Otherwise `max(min_samples, 401)` uniform
/// samples are used.
std::vector<double> characteristic_samples(double k, const GridGeometry& grid, int min_samples = 0);

/// max over nodes of |f'_x + k f'_y|.
double residual_first_order(const Function2D& f, double k, const GridGeometry& grid, double h, int threads = 1);

struct ProfileOptions {
    /// 0 selects the grid-aligned lattice as is.
    int min_samples = 0;
    /// Line y = baseline_y used to read the profile.
    double baseline_y = 0.0;
    int threads = 1;
};

struct ProfileExtraction {
    Profile1D profile;
    /// max over nodes of |f(x,y) - phi(k x - y)|.
    double reconstruction_error = 0.0;
};

/// phi(s) = f on the line k x - y = s, read at the point of the line closest
/// to the baseline (i.e. f((s + y0)/k, y0) whenever that lies in the grid).
ProfileExtraction extract_profile(const Function2D& f, double k, const GridGeometry& grid,
                                  const ProfileOptions& opts = {});

struct DecompositionOptions {
    double h = 1e-4;
    double residual_gate = 1e-3;
    int max_order = 4;
    /// Nodes per axis of the probe grid used for the hypothesis gate.
    int probe_points = 11;
    ProfileOptions profile;
};

struct DecompositionMetadata {
    double h = 0.0;
    GridGeometry grid;
    bool exact_partials = false;
    /// Gate applied at each recursion level, outermost first.
    std::vector<double> gates;
};

struct DecompositionResult {
    int order = 0;
    /// phi_1 .. phi_n, all over the range of x - y.
    std::vector<Profile1D> profiles;
    /// max |D_n f| over the grid.
    double residual = 0.0;
    /// max |f - sum (x+y)^(i-1) phi_i(x-y)| over the grid.
    double reconstruction_error = 0.0;
    DecompositionMetadata metadata;
};

/// D_1 f = f'_x + f'_y, with exact partials carried over from f where f has
/// them one order higher; otherwise a central-difference closure of step h.
Function2D apply_d1(const Function2D& f, double h);

/// Sum_i (x+y)^(i-1) phi_i(x-y) from sampled profiles.
Function2D reconstruct_poly(const std::vector<Profile1D>& profiles, Rect domain);

/// Representation f = sum_i (x+y)^(i-1) phi_i(x-y) for D_n f = 0, built by
/// the inductive construction: decompose D_1 f to psi_1..psi_{n-1}, set
/// phi_{i+1} = psi_i / (2i), then read phi_1 from f - u.
///
/// Throws HypothesisViolation when |D_n f| exceeds the gate on the probe grid
/// (or at any declared singular point inside the grid), UnsupportedError
/// when n exceeds max_order.
DecompositionResult decompose_dn(const Function2D& f, int n, const GridGeometry& grid,
                                 const DecompositionOptions& opts = {});

struct WaveOptions {
    double h = 1e-4;
    double gate = 1e-3;
    int samples = 801;
    /// Trapezoid sub-steps per profile interval for the psi antiderivative.
    int quadrature_refinement = 8;
    int probe_points = 11;
    double baseline_y = 0.0;
    int threads = 1;
};

struct WaveSplit {
    Profile1D phi;
    Profile1D psi;
    Profile1D psi_tilde;
    /// max |f''_xy - f''_yx| on the probe grid.
    double symmetry_defect = 0.0;
    /// max |f''_xx - f''_yy| on the probe grid.
    double equality_defect = 0.0;
    /// max deviation of f'_x - f'_y along lines x - y = c.
    double characteristic_defect = 0.0;
    double reconstruction_error = 0.0;
};

/// f = phi(x+y) + psi(x-y) with gauge psi(0) = 0, for f''_xx = f''_yy and
/// f''_xy = f''_yx. Throws HypothesisViolation naming the failed check.
WaveSplit decompose_wave(const Function2D& f, const GridGeometry& grid, const WaveOptions& opts = {});

} // namespace pdestruct
