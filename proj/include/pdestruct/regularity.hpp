#pragma once

#include "pdestruct/function_model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace pdestruct {

/// Ring fractions of the radius at which a ball is sampled (plus its centre).
inline constexpr double kBallRings[] = {0.25, 0.5, 0.75, 1.0};

struct OscillationEstimate {
    std::vector<double> radii;
    /// Running infimum of (max - min) over the sampled balls, one per radius.
    std::vector<double> estimates;
    double value = 0.0;
};

/// Oscillation of f at p over shrinking balls, each sampled on concentric
/// rings with `samples_per_radius` angles. Radii must be strictly
/// decreasing and every ball must lie inside f's domain.
OscillationEstimate oscillation(const Function2D& f, Point p, std::span<const double> radii, int samples_per_radius);

struct BoxWitness {
    /// Lower corner of the k x k box.
    GridNode box;
    /// Lower corner of a flag-free sub-box, if any.
    std::optional<GridNode> clean_sub_box;
};

struct NowhereDenseVerdict {
    bool nowhere_dense = true;
    int box = 5;
    int sub_box = 3;
    std::vector<BoxWitness> witnesses;
};

/// Every k x k box of the grid must contain a ceil(k/2) sub-box with no
/// flagged node. The boxes tile the grid from node (0,0) (the last box in a
/// row is shifted back to end on the edge); a grid smaller than k is one box.
///
/// Sliding windows would not work here: a window centred on an isolated
/// flagged node has no clean sub-box of that size either.
NowhereDenseVerdict box_rule(int nx, int ny, const std::vector<char>& flagged, int k = 5);

struct DiscontinuityOptions {
    std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4};
    int samples_per_radius = 720;
    /// When unset, 10x the oscillation of plane_wave(sin, 1) at the origin
    /// for the same radii and sampling.
    std::optional<double> threshold;
    /// A node is flagged only if its estimate at the last radius keeps at
    /// least this fraction of the estimate at the radius before. Steep but
    /// continuous points decay like the radius and drop out; a jump does
    /// not decay. 0 turns the check off.
    double persistence = 0.5;
    int box = 5;
    /// Optional node mask (row-major, x slow); nodes outside are skipped.
    std::vector<char> mask;
    int threads = 1;
};

struct RegularityReport {
    GridGeometry grid;
    double threshold = 0.0;
    std::vector<double> oscillation;
    std::vector<GridNode> flagged;
    NowhereDenseVerdict verdict;
    /// Local Lipschitz estimate at the smallest radius.
    std::vector<double> lipschitz;
    /// Lipschitz estimate grew >= 10x at every radius refinement.
    std::vector<char> lipschitz_divergent;
};

/// Oscillation at every node (balls clipped to f's domain), flags nodes over
/// the threshold whose estimate persists as the radius shrinks, and applies
/// the box rule.
RegularityReport discontinuity_field(const Function2D& f, const GridGeometry& grid, const DiscontinuityOptions& opts);

double default_discontinuity_threshold(std::span<const double> radii, int samples_per_radius);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct ChangeableCover {
    double epsilon = 0.0;
    std::vector<Interval> intervals;
    bool dense = false;
};

/// Open intervals on which g is epsilon-Lipschitz at sampling scale.
///
/// [a,b] is cut into 4*resolution sub-cells, each checked with all pair
/// quotients of 9 samples; maximal runs of good sub-cells are merged. The
/// cover is dense when no run of bad sub-cells spans a whole window of
/// length (b-a)/resolution.
ChangeableCover lipschitz_cover(const Evaluator1D& g, double epsilon, double a, double b, int resolution);

struct ConstancyReport {
    double k = 1.0;
    std::vector<double> offsets;
    std::vector<double> deviations;
    double max_deviation = 0.0;
    double tol = 0.0;
    bool pass = true;
};

/// max - min of f along k x - y = c for `lines` offsets c strictly inside
/// the rectangle's range, each line sampled at `samples_per_line` points.
ConstancyReport constancy_along_characteristics(const Function2D& f, double k, const GridGeometry& grid, double tol,
                                                int lines = 101, int samples_per_line = 101, int threads = 1);

} // namespace pdestruct
