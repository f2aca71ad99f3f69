#pragma once

#include "pmeb/geometry.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace pmeb {

enum class DatumKind { constant, gaussian_bump, polynomial_radial, custom_table };

std::string_view to_string(DatumKind kind);
DatumKind parse_datum_kind(std::string_view name);

/// A profile f(|x|) in the distance from the origin.
///
///   constant           f = amplitude
///   gaussian-bump      f = offset + amplitude exp(-r^2 / (2 width^2))
///   polynomial-radial  f = offset + amplitude (r / width)^2
///   custom-table       piecewise linear through (r, u) pairs, linear extrapolation
///
/// When `project` is set the profile receives a boundary-layer correction
/// lambda l exp((x^2 - L^2) / (2 L l)) per axis so that du/dnu = k u^beta holds
/// on the boundary.
struct InitialDatum {
    DatumKind kind = DatumKind::constant;
    double amplitude = 1.0;
    double width = 1.0;
    double offset = 0.0;
    std::vector<std::pair<double, double>> table;
    bool project = true;
    double compatibility_tolerance = 1e-8;
};

/// Boundary flux g(u) = k u^beta.
struct FluxLaw {
    double k = 0.0;
    double beta = 1.0;

    double operator()(double u) const;
};

/// The datum after compatibility projection, evaluable at any point.
class CompatibleProfile {
public:
    CompatibleProfile(const InitialDatum& datum, const DomainGeometry& geometry, FluxLaw flux);

    double value(double x, double y = 0.0) const;
    /// Outward normal derivative at a boundary node; for rectangle corners the
    /// larger mismatch of the two edge normals is what the residual uses.
    double normal_derivative(const SpatialGrid& grid, std::size_t node, int axis) const;
    /// max |du/dnu - g(u)| over the boundary nodes of `grid`.
    double residual(const SpatialGrid& grid) const;

    double lambda_x() const { return lambda_[0]; }
    double lambda_y() const { return lambda_[1]; }

private:
    double base(double r) const;
    double base_slope(double r) const;
    double layer(int axis, double x) const;
    double layer_slope(int axis, double x) const;
    void solve_projection();

    InitialDatum datum_;
    DomainGeometry geometry_;
    FluxLaw flux_;
    double length_[2] = {0.0, 0.0};
    double lambda_[2] = {0.0, 0.0};
};

/// Node values of the compatible datum; throws ConfigurationError when the
/// field is not strictly positive or the residual exceeds the tolerance.
std::vector<double> sample_initial_field(const InitialDatum& datum, const SpatialGrid& grid, FluxLaw flux);

double compatibility_residual(const InitialDatum& datum, const SpatialGrid& grid, FluxLaw flux);

} // namespace pmeb
