#include "pmeb/geometry.hpp"

#include "pmeb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pmeb {

namespace {

constexpr double pi = std::numbers::pi;

// Surface measure of the unit sphere in R^N for the radial shapes.
double unit_sphere_area(int dimension)
{
    return dimension == 2 ? 2.0 * pi : 4.0 * pi;
}

std::vector<double> trapezoid_weights(int intervals, double spacing)
{
    std::vector<double> w(static_cast<std::size_t>(intervals) + 1, spacing);
    w.front() = w.back() = 0.5 * spacing;
    return w;
}

std::vector<double> uniform_nodes(double lo, double hi, int intervals)
{
    std::vector<double> x(static_cast<std::size_t>(intervals) + 1);
    const double h = (hi - lo) / intervals;
    for (int i = 0; i <= intervals; ++i)
        x[static_cast<std::size_t>(i)] = lo + i * h;
    x.back() = hi;
    return x;
}

// Derivative along one axis of a line of nodes, central inside, second-order
// one-sided at the two ends.
double line_derivative(std::span<const double> v, std::size_t n, std::size_t i, std::size_t stride, std::size_t base,
                       double h)
{
    auto at = [&](std::size_t k) { return v[base + k * stride]; };
    if (i == 0)
        return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    if (i == n)
        return (3.0 * at(n) - 4.0 * at(n - 1) + at(n - 2)) / (2.0 * h);
    return (at(i + 1) - at(i - 1)) / (2.0 * h);
}

} // namespace

std::string_view to_string(ShapeKind kind)
{
    switch (kind) {
    case ShapeKind::interval: return "interval";
    case ShapeKind::disk_radial: return "disk-radial";
    case ShapeKind::ball_radial: return "ball-radial";
    case ShapeKind::rectangle: return "rectangle";
    }
    return "unknown";
}

ShapeKind parse_shape_kind(std::string_view name)
{
    if (name == "interval")
        return ShapeKind::interval;
    if (name == "disk-radial" || name == "disk")
        return ShapeKind::disk_radial;
    if (name == "ball-radial" || name == "ball")
        return ShapeKind::ball_radial;
    if (name == "rectangle")
        return ShapeKind::rectangle;
    throw ConfigurationError("unsupported shape kind '" + std::string(name) + "'");
}

DomainShape::DomainShape(ShapeKind kind, double ex, double ey) : kind_(kind), extent_x_(ex), extent_y_(ey)
{
    if (!(ex > 0.0) || !std::isfinite(ex))
        throw ConfigurationError("domain extent must be strictly positive");
    if (kind == ShapeKind::rectangle && (!(ey > 0.0) || !std::isfinite(ey)))
        throw ConfigurationError("rectangle half-width in y must be strictly positive");
}

DomainShape DomainShape::interval(double half_length) { return {ShapeKind::interval, half_length, 0.0}; }
DomainShape DomainShape::disk(double radius) { return {ShapeKind::disk_radial, radius, 0.0}; }
DomainShape DomainShape::ball(double radius) { return {ShapeKind::ball_radial, radius, 0.0}; }
DomainShape DomainShape::rectangle(double hx, double hy) { return {ShapeKind::rectangle, hx, hy}; }

DomainShape DomainShape::make(ShapeKind kind, double extent_x, double extent_y)
{
    return {kind, extent_x, kind == ShapeKind::rectangle ? extent_y : 0.0};
}

int DomainShape::dimension() const
{
    switch (kind_) {
    case ShapeKind::interval: return 1;
    case ShapeKind::disk_radial: return 2;
    case ShapeKind::ball_radial: return 3;
    case ShapeKind::rectangle: return 2;
    }
    return 0;
}

DomainGeometry compute_geometry(const DomainShape& shape)
{
    const double ex = shape.extent_x();
    switch (shape.kind()) {
    case ShapeKind::interval:
        return {shape, ex, ex, 2.0 * ex, 2.0, 1};
    case ShapeKind::disk_radial:
        return {shape, ex, ex, pi * ex * ex, 2.0 * pi * ex, 2};
    case ShapeKind::ball_radial:
        return {shape, ex, ex, 4.0 * pi * ex * ex * ex / 3.0, 4.0 * pi * ex * ex, 3};
    case ShapeKind::rectangle: {
        const double ey = shape.extent_y();
        // (x - x0) . nu equals the half-width of the face it is evaluated on
        return {shape, std::min(ex, ey), std::hypot(ex, ey), 4.0 * ex * ey, 4.0 * (ex + ey), 2};
    }
    }
    throw ConfigurationError("unsupported shape kind");
}

SpatialGrid build_grid(const DomainGeometry& geometry, int resolution)
{
    if (resolution < SpatialGrid::minimum_resolution)
        throw ConfigurationError("grid resolution must be at least " +
                                 std::to_string(SpatialGrid::minimum_resolution));

    SpatialGrid grid(geometry, resolution);
    const auto n = static_cast<std::size_t>(resolution);
    const DomainShape& shape = geometry.shape;

    switch (shape.kind()) {
    case ShapeKind::interval: {
        const double L = shape.extent_x();
        const double h = 2.0 * L / resolution;
        grid.axes_ = {uniform_nodes(-L, L, resolution)};
        grid.spacing_ = {h};
        grid.cell_weights_ = trapezoid_weights(resolution, h);
        grid.boundary_weights_.assign(n + 1, 0.0);
        grid.boundary_weights_.front() = grid.boundary_weights_.back() = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            grid.faces_.push_back({i, i + 1, 1.0 / h});
        break;
    }
    case ShapeKind::disk_radial:
    case ShapeKind::ball_radial: {
        const int N = geometry.dimension;
        const double R = shape.extent_x();
        const double h = R / resolution;
        const double omega = unit_sphere_area(N);
        grid.axes_ = {uniform_nodes(0.0, R, resolution)};
        grid.spacing_ = {h};
        grid.cell_weights_.resize(n + 1);
        double inner = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            const double outer = (i == n) ? R : (static_cast<double>(i) + 0.5) * h;
            grid.cell_weights_[i] = omega / N * (std::pow(outer, N) - std::pow(inner, N));
            if (i < n)
                grid.faces_.push_back({i, i + 1, omega * std::pow(outer, N - 1) / h});
            inner = outer;
        }
        grid.boundary_weights_.assign(n + 1, 0.0);
        grid.boundary_weights_.back() = geometry.surface;
        break;
    }
    case ShapeKind::rectangle: {
        const double Lx = shape.extent_x();
        const double Ly = shape.extent_y();
        const double hx = 2.0 * Lx / resolution;
        const double hy = 2.0 * Ly / resolution;
        grid.axes_ = {uniform_nodes(-Lx, Lx, resolution), uniform_nodes(-Ly, Ly, resolution)};
        grid.spacing_ = {hx, hy};
        const auto wx = trapezoid_weights(resolution, hx);
        const auto wy = trapezoid_weights(resolution, hy);
        const std::size_t stride = n + 1;
        grid.cell_weights_.resize(stride * stride);
        grid.boundary_weights_.assign(stride * stride, 0.0);
        for (std::size_t j = 0; j <= n; ++j) {
            for (std::size_t i = 0; i <= n; ++i) {
                const std::size_t node = i + stride * j;
                grid.cell_weights_[node] = wx[i] * wy[j];
                if (i == 0 || i == n)
                    grid.boundary_weights_[node] += wy[j];
                if (j == 0 || j == n)
                    grid.boundary_weights_[node] += wx[i];
                if (i < n)
                    grid.faces_.push_back({node, node + 1, wy[j] / hx});
                if (j < n)
                    grid.faces_.push_back({node, node + stride, wx[i] / hy});
            }
        }
        break;
    }
    }
    return grid;
}

double SpatialGrid::min_spacing() const
{
    return *std::min_element(spacing_.begin(), spacing_.end());
}

double SpatialGrid::coordinate(std::size_t node, int a) const
{
    if (axes_.size() == 1)
        return axes_[0][node];
    const std::size_t stride = axes_[0].size();
    return a == 0 ? axes_[0][node % stride] : axes_[1][node / stride];
}

double SpatialGrid::distance_from_origin(std::size_t node) const
{
    if (axes_.size() == 1)
        return std::abs(axes_[0][node]);
    return std::hypot(coordinate(node, 0), coordinate(node, 1));
}

std::vector<double> SpatialGrid::gradient_squared(std::span<const double> values,
                                                  std::span<const double> normal_derivative) const
{
    const std::size_t total = size();
    if (values.size() != total)
        throw PreconditionError("gradient_squared: one value per node required");
    const bool given = !normal_derivative.empty();
    const auto n = static_cast<std::size_t>(resolution_);
    std::vector<double> g2(total, 0.0);

    if (axes_.size() == 1) {
        const double h = spacing_[0];
        for (std::size_t i = 0; i <= n; ++i) {
            double di = 0.0;
            if (is_radial() && i == 0)
                di = 0.0;
            else if (given && (i == n || (!is_radial() && i == 0)))
                di = normal_derivative[i];
            else
                di = line_derivative(values, n, i, 1, 0, h);
            g2[i] = di * di;
        }
        return g2;
    }

    const std::size_t stride = n + 1;
    for (std::size_t j = 0; j <= n; ++j) {
        for (std::size_t i = 0; i <= n; ++i) {
            const std::size_t node = i + stride * j;
            const bool x_edge = (i == 0 || i == n);
            const bool y_edge = (j == 0 || j == n);
            const double dx = (given && x_edge) ? normal_derivative[node]
                                                : line_derivative(values, n, i, 1, stride * j, spacing_[0]);
            const double dy = (given && y_edge) ? normal_derivative[node]
                                                : line_derivative(values, n, j, stride, i, spacing_[1]);
            g2[node] = dx * dx + dy * dy;
        }
    }
    return g2;
}

namespace {

double weighted_power_sum(std::span<const double> weights, std::span<const double> values, double exponent)
{
    if (values.size() != weights.size())
        throw PreconditionError("integrate: one value per node required");
    if (exponent < 0.0)
        throw DomainError("integrate: exponent must be nonnegative");
    const bool integral_exponent = std::floor(exponent) == exponent;
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (v < 0.0 && !integral_exponent)
            throw DomainError("integrate: negative field value with non-integer exponent");
        if (weights[i] == 0.0)
            continue;
        sum += weights[i] * (exponent == 1.0 ? v : std::pow(v, exponent));
    }
    return sum;
}

} // namespace

double integrate(const SpatialGrid& grid, std::span<const double> values, double exponent)
{
    return weighted_power_sum(grid.cell_weights(), values, exponent);
}

double integrate_boundary(const SpatialGrid& grid, std::span<const double> values, double exponent)
{
    return weighted_power_sum(grid.boundary_weights(), values, exponent);
}

} // namespace pmeb
