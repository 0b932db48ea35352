#pragma once

#include "pdestruct/function_model.hpp"

#include <optional>
#include <vector>

namespace pdestruct {

/// Successive refinements must grow by at least this factor to count as divergent.
inline constexpr double kDivergenceGrowth = 10.0;
/// Step reduction between rungs of the convergence ladder.
inline constexpr double kLadderRefinement = 10.0;

/// (g(x1) - g(x2)) / (x1 - x2). Throws DegenerateInputError when x1 == x2.
double diff_quotient(const Evaluator1D& g, double x1, double x2);

struct PartialEstimate {
    /// Exact partial when available at the point, otherwise the FD value.
    double value = 0.0;
    /// Nested-difference value, kept for cross-checking exact partials.
    std::optional<double> fd_value;
    bool exact_used = false;
};

/// Nested first-order differences along `path`, innermost (path[0]) first.
///
/// Central differences are used wherever the stencil fits in the domain;
/// at domain edges a second-order one-sided stencil takes over. Throws
/// DomainError when neither fits and NumericalError on non-finite values.
double nested_difference(const Function2D& f, const DerivativePath& path, Point p, double h);

/// Partial derivative of f along path at p. Prefers the exact partial and
/// attaches the FD value when the FD stencil can be evaluated.
PartialEstimate fd_partial(const Function2D& f, const DerivativePath& path, Point p, double h);

/// FD values at outer steps h, h/10, h/100, ... and the divergence verdict.
///
/// Each inner axis of the path uses the cube of the step of the axis applied
/// after it, so every rung approximates the iterated limit that defines an
/// ordered partial (inner derivative first). With equal steps f''_xy and
/// f''_yx would share one 4-point stencil and could not be told apart.
/// Intended for outer steps around 1e-1; tiny outer steps drive the inner
/// steps below rounding.
struct ConvergenceLadder {
    std::vector<double> steps;
    std::vector<double> values;
    /// True when every refinement grows in magnitude by >= kDivergenceGrowth.
    bool diverged = false;
};

ConvergenceLadder fd_ladder(const Function2D& f, const DerivativePath& path, Point p, double h, int rungs = 3);

/// True when |values| grow by at least kDivergenceGrowth at every step.
bool grows_without_bound(const std::vector<double>& values);

/// Sum over all 2^n order-n paths of fd_partial.
double dn_apply(const Function2D& f, int n, Point p, double h);

struct QuotientSample {
    Point p;
    Point q;
    double quotient = 0.0;
    double distance = 0.0;
    double cos_alpha = 1.0;
    double sin_alpha = 0.0;
};

/// (f(q) - f(p)) / |q - p| and the direction of p -> q.
QuotientSample directional_quotient(const Function2D& f, Point p, Point q);

} // namespace pdestruct
