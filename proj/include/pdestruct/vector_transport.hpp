#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdestruct {

using Vec = std::vector<double>;

/// Axis-aligned box in R^d.
struct Box {
    Vec lo;
    Vec hi;

    int dim() const noexcept { return static_cast<int>(lo.size()); }
    bool contains(std::span<const double> p) const noexcept;
    void validate() const;
};

using VectorEvaluator = std::function<Vec(std::span<const double>, std::span<const double>)>;
using SectionMap = std::function<Vec(std::span<const double>)>;

/// F : R^d x R^d -> R^m on x_box x y_box.
class VectorMap {
public:
    VectorMap(std::string name, int d, int m, Box x_box, Box y_box, VectorEvaluator evaluator);

    const std::string& name() const noexcept { return name_; }
    int d() const noexcept { return d_; }
    int m() const noexcept { return m_; }
    const Box& x_box() const noexcept { return x_box_; }
    const Box& y_box() const noexcept { return y_box_; }

    /// Throws DomainError outside the boxes and NumericalError on non-finite output.
    Vec operator()(std::span<const double> x, std::span<const double> y) const;

private:
    std::string name_;
    int d_;
    int m_;
    Box x_box_;
    Box y_box_;
    VectorEvaluator eval_;
};

struct DirectionalDerivative {
    /// Richardson-extrapolated value from steps `step` and `step/10`.
    double value = 0.0;
    double coarse = 0.0;
    double fine = 0.0;
    /// |fine - coarse|
    double error_estimate = 0.0;
};

/// Derivative of t -> G(x0 + t h)_l at t = 0 by central differences with one
/// refinement (step/10). Throws NumericalError with a non-differentiable
/// verdict when the refined quotient grows by >= 10x.
DirectionalDerivative l_directional_derivative(const SectionMap& g, std::span<const double> x0,
                                               std::span<const double> direction, int coordinate, double step);

struct GateauxEntry {
    int basis = 0;
    int coordinate = 0;
    /// Derivative of the section x -> F(x, y).
    double d_first = 0.0;
    /// Derivative of the section y -> F(x, y).
    double d_second = 0.0;
    double residual = 0.0;
};

struct GateauxReport {
    std::vector<GateauxEntry> entries;
    double max_residual = 0.0;
};

/// |Df_y(x)(h, l) + Df^x(y)(h, l)| for every basis direction h and coordinate l.
GateauxReport gateaux_residual(const VectorMap& f, std::span<const double> x, std::span<const double> y,
                               const std::vector<Vec>& basis, double step);

std::vector<Vec> standard_basis(int d);

struct ProbePair {
    Vec x;
    Vec y;
};

/// Deterministic probe pairs: `count` x-points and `count` y-points from a
/// Kronecker sequence in the given boxes, all count^2 pairs.
std::vector<ProbePair> probe_pairs(const Box& x_region, const Box& y_region, int count);

struct TranslationVerdict {
    bool pass = false;
    double max_defect = 0.0;
    std::vector<double> defects;
    /// phi(x) = F(x, 0) on a regular grid of the x box.
    std::vector<Vec> phi_points;
    std::vector<Vec> phi_values;
};

/// Checks F(x, y) = F(x - y, 0) in the sup norm over the probes.
TranslationVerdict verify_translation(const VectorMap& f, const std::vector<ProbePair>& probes, double tol,
                                      int phi_points_per_axis = 5);

std::vector<std::string> vector_catalog_names();
/// translation (x - y), sum (x + y), chain (phi(x - y) with phi(u) = (|u|^2, u_1), d = 2),
/// sin_square ((sin(x1 - y1), (x2 - y2)^2), d = 2). Boxes are [-2, 2]^d.
VectorMap vector_catalog_get(std::string_view name, int d);

} // namespace pdestruct
