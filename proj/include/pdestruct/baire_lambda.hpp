#pragma once

#include "pdestruct/function_model.hpp"

#include <span>
#include <vector>

namespace pdestruct {

/// Discretised Baire lambda value of g at x for the window W = [-eps, eps].
///
/// Scans the dyadic ladder 1, 1/2, ..., 2^-resolution from the top and
/// returns the first delta for which every pair of difference quotients
/// r_g(a,b), r_g(a',b') with a,a' in (x-delta, x) and b,b' in (x, x+delta)
/// differs by at most eps. Each open half-window is sampled at `resolution`
/// midpoints. Returns 0 when no candidate qualifies.
///
/// `max_delta` caps the ladder (candidates above it are skipped).
double lambda_1d(const Evaluator1D& g, double x, double epsilon, int resolution, double max_delta = 1.0);

struct LambdaField {
    GridGeometry grid;
    double epsilon = 0.0;
    /// Differentiation variable; the other coordinate is frozen.
    Axis axis = Axis::x;
    int resolution = 0;
    std::vector<double> values;
    /// Largest ladder candidate tried at each node (0 when none fitted).
    std::vector<double> ceilings;

    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

/// lambda_1d of the section through every node. The ladder at a node starts
/// at the largest dyadic candidate whose window stays inside f's domain.
LambdaField lambda_field(const Function2D& f, Axis axis, double epsilon, const GridGeometry& grid, int resolution,
                         int threads = 1);

/// Nodes whose value is below the max over their 8 neighbours minus tol.
std::vector<GridNode> usc_violations(const GridGeometry& grid, std::span<const double> values, double tol);

/// Upper end of the bracket the dyadic ladder puts on the exact supremum:
/// a node valued v below its ceiling failed the candidate 2v, so the
/// supremum lies in [v, 2v]. Nodes whose ladder was cut short by the domain
/// are unbounded.
std::vector<double> lambda_upper_bounds(const LambdaField& field);

/// Nodes where some neighbour's value exceeds the node's upper bound by more
/// than tol. Comparing raw values instead would report every ladder step
/// between neighbours (up to half the value) as a failure.
std::vector<GridNode> usc_violations(const LambdaField& field, double tol);

} // namespace pdestruct
