#include "pmeb/initial_datum.hpp"

#include "pmeb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pmeb {

std::string_view to_string(DatumKind kind)
{
    switch (kind) {
    case DatumKind::constant: return "constant";
    case DatumKind::gaussian_bump: return "gaussian-bump";
    case DatumKind::polynomial_radial: return "polynomial-radial";
    case DatumKind::custom_table: return "custom-table";
    }
    return "?";
}

DatumKind parse_datum_kind(std::string_view name)
{
    if (name == "constant")
        return DatumKind::constant;
    if (name == "gaussian-bump" || name == "gaussian")
        return DatumKind::gaussian_bump;
    if (name == "polynomial-radial" || name == "polynomial")
        return DatumKind::polynomial_radial;
    if (name == "custom-table" || name == "table")
        return DatumKind::custom_table;
    throw ConfigurationError("unknown initial datum kind '" + std::string(name) + "'");
}

double FluxLaw::operator()(double u) const
{
    return k == 0.0 ? 0.0 : k * std::pow(u, beta);
}

CompatibleProfile::CompatibleProfile(const InitialDatum& datum, const DomainGeometry& geometry, FluxLaw flux)
    : datum_(datum), geometry_(geometry), flux_(flux)
{
    if (datum_.kind == DatumKind::custom_table) {
        if (datum_.table.size() < 2)
            throw ConfigurationError("custom-table datum needs at least two (r, u) pairs");
        for (std::size_t i = 1; i < datum_.table.size(); ++i)
            if (!(datum_.table[i].first > datum_.table[i - 1].first))
                throw ConfigurationError("custom-table radii must be strictly increasing");
    } else if ((datum_.kind == DatumKind::gaussian_bump || datum_.kind == DatumKind::polynomial_radial) &&
               !(datum_.width > 0.0)) {
        throw ConfigurationError("datum width must be positive");
    }
    length_[0] = geometry_.shape.extent_x() / 8.0;
    length_[1] = geometry_.shape.kind() == ShapeKind::rectangle ? geometry_.shape.extent_y() / 8.0 : 0.0;
    if (datum_.project)
        solve_projection();
}

double CompatibleProfile::base(double r) const
{
    switch (datum_.kind) {
    case DatumKind::constant: return datum_.amplitude;
    case DatumKind::gaussian_bump:
        return datum_.offset + datum_.amplitude * std::exp(-r * r / (2.0 * datum_.width * datum_.width));
    case DatumKind::polynomial_radial: return datum_.offset + datum_.amplitude * (r / datum_.width) * (r / datum_.width);
    case DatumKind::custom_table: {
        const auto& t = datum_.table;
        auto hi = std::upper_bound(t.begin() + 1, t.end() - 1, r,
                                   [](double x, const std::pair<double, double>& e) { return x < e.first; });
        auto lo = hi - 1;
        const double w = (r - lo->first) / (hi->first - lo->first);
        return lo->second + w * (hi->second - lo->second);
    }
    }
    return 0.0;
}

double CompatibleProfile::base_slope(double r) const
{
    switch (datum_.kind) {
    case DatumKind::constant: return 0.0;
    case DatumKind::gaussian_bump: {
        const double w2 = datum_.width * datum_.width;
        return -datum_.amplitude * r / w2 * std::exp(-r * r / (2.0 * w2));
    }
    case DatumKind::polynomial_radial: return 2.0 * datum_.amplitude * r / (datum_.width * datum_.width);
    case DatumKind::custom_table: {
        const auto& t = datum_.table;
        // the segment ending at r, so the outermost node uses the last segment
        auto hi = std::lower_bound(t.begin() + 1, t.end() - 1, r,
                                   [](const std::pair<double, double>& e, double x) { return e.first < x; });
        auto lo = hi - 1;
        return (hi->second - lo->second) / (hi->first - lo->first);
    }
    }
    return 0.0;
}

double CompatibleProfile::layer(int axis, double x) const
{
    const double l = length_[axis];
    if (l == 0.0 || lambda_[axis] == 0.0)
        return 0.0;
    const double L = axis == 0 ? geometry_.shape.extent_x() : geometry_.shape.extent_y();
    return lambda_[axis] * l * std::exp((x * x - L * L) / (2.0 * L * l));
}

double CompatibleProfile::layer_slope(int axis, double x) const
{
    const double l = length_[axis];
    if (l == 0.0 || lambda_[axis] == 0.0)
        return 0.0;
    const double L = axis == 0 ? geometry_.shape.extent_x() : geometry_.shape.extent_y();
    return lambda_[axis] * x / L * std::exp((x * x - L * L) / (2.0 * L * l));
}

double CompatibleProfile::value(double x, double y) const
{
    const double r = std::hypot(x, y);
    return base(r) + layer(0, x) + (length_[1] > 0.0 ? layer(1, y) : 0.0);
}

void CompatibleProfile::solve_projection()
{
    const bool rect = geometry_.shape.kind() == ShapeKind::rectangle;
    const double Lx = geometry_.shape.extent_x();
    const double Ly = rect ? geometry_.shape.extent_y() : 0.0;

    // lambda = g(u(L)) - f'(L) at the reference boundary points (L, 0) and (0, Ly),
    // iterated to a fixed point; a thinner layer makes the map contractive.
    for (int attempt = 0; attempt < 30; ++attempt) {
        lambda_[0] = lambda_[1] = 0.0;
        bool converged = false;
        for (int it = 0; it < 500 && !converged; ++it) {
            const double ux = value(Lx, 0.0);
            const double next_x = flux_(ux) - base_slope(Lx);
            double next_y = 0.0;
            if (rect)
                next_y = flux_(value(0.0, Ly)) - base_slope(Ly);
            if (!std::isfinite(next_x) || !std::isfinite(next_y))
                break;
            const double change = std::max(std::abs(next_x - lambda_[0]), std::abs(next_y - lambda_[1]));
            const double scale = std::max({1.0, std::abs(next_x), std::abs(next_y)});
            lambda_[0] = next_x;
            lambda_[1] = next_y;
            converged = change <= 1e-15 * scale;
        }
        if (converged)
            return;
        length_[0] *= 0.5;
        length_[1] *= 0.5;
    }
    throw ConfigurationError("compatibility projection did not converge; reduce k or the datum amplitude");
}

double CompatibleProfile::normal_derivative(const SpatialGrid& grid, std::size_t node, int axis) const
{
    const double x = grid.coordinate(node, 0);
    if (grid.is_radial())
        return base_slope(x) + layer_slope(0, x);
    if (grid.axis_count() == 1) {
        const double sign = x > 0.0 ? 1.0 : -1.0;
        return sign * (sign * base_slope(std::abs(x)) + layer_slope(0, x));
    }
    const double y = grid.coordinate(node, 1);
    const double r = std::hypot(x, y);
    const double c = axis == 0 ? x : y;
    const double sign = c > 0.0 ? 1.0 : -1.0;
    const double radial = r > 0.0 ? base_slope(r) * c / r : 0.0;
    return sign * (radial + layer_slope(axis, c));
}

double CompatibleProfile::residual(const SpatialGrid& grid) const
{
    double worst = 0.0;
    for (std::size_t node = 0; node < grid.size(); ++node) {
        if (!grid.on_boundary(node))
            continue;
        const double u = value(grid.coordinate(node, 0), grid.axis_count() == 2 ? grid.coordinate(node, 1) : 0.0);
        const double g = flux_(u);
        if (grid.axis_count() == 1) {
            worst = std::max(worst, std::abs(normal_derivative(grid, node, 0) - g));
            continue;
        }
        const auto n = static_cast<std::size_t>(grid.resolution());
        const std::size_t i = node % (n + 1), j = node / (n + 1);
        if (i == 0 || i == n)
            worst = std::max(worst, std::abs(normal_derivative(grid, node, 0) - g));
        if (j == 0 || j == n)
            worst = std::max(worst, std::abs(normal_derivative(grid, node, 1) - g));
    }
    return worst;
}

std::vector<double> sample_initial_field(const InitialDatum& datum, const SpatialGrid& grid, FluxLaw flux)
{
    const CompatibleProfile profile(datum, grid.geometry(), flux);
    std::vector<double> u(grid.size());
    for (std::size_t node = 0; node < grid.size(); ++node) {
        const double y = grid.axis_count() == 2 ? grid.coordinate(node, 1) : 0.0;
        u[node] = profile.value(grid.coordinate(node, 0), y);
        if (!(u[node] > 0.0) || !std::isfinite(u[node]))
            throw ConfigurationError("initial datum is not strictly positive at node " + std::to_string(node));
    }
    const double res = profile.residual(grid);
    if (res > datum.compatibility_tolerance)
        throw ConfigurationError("initial datum violates du/dnu = g(u) on the boundary: residual " +
                                 std::to_string(res) + " > tolerance " +
                                 std::to_string(datum.compatibility_tolerance));
    return u;
}

double compatibility_residual(const InitialDatum& datum, const SpatialGrid& grid, FluxLaw flux)
{
    return CompatibleProfile(datum, grid.geometry(), flux).residual(grid);
}

} // namespace pmeb
