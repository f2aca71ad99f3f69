#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmeb {

enum class ShapeKind { interval, disk_radial, ball_radial, rectangle };

std::string_view to_string(ShapeKind kind);
/// Accepts "interval", "disk-radial" (or "disk"), "ball-radial" (or "ball"), "rectangle".
ShapeKind parse_shape_kind(std::string_view name);

/// Star-shaped domain centred on the origin x0 = 0 (its centroid).
///
/// extent_x is the half-length L (interval), the radius R (disk, ball) or the
/// half-width Lx (rectangle); extent_y is only meaningful for the rectangle.
class DomainShape {
public:
    static DomainShape interval(double half_length);
    static DomainShape disk(double radius);
    static DomainShape ball(double radius);
    static DomainShape rectangle(double half_width_x, double half_width_y);
    /// Generic factory used by the config reader; validates the extents.
    static DomainShape make(ShapeKind kind, double extent_x, double extent_y = 0.0);

    ShapeKind kind() const { return kind_; }
    double extent_x() const { return extent_x_; }
    double extent_y() const { return extent_y_; }
    int dimension() const;
    bool is_radial() const { return kind_ == ShapeKind::disk_radial || kind_ == ShapeKind::ball_radial; }

private:
    DomainShape(ShapeKind kind, double ex, double ey);

    ShapeKind kind_;
    double extent_x_;
    double extent_y_;
};

/// The shape plus the scalars that enter every bound constant.
struct DomainGeometry {
    DomainShape shape;
    double rho0;    ///< min over the boundary of (x - x0) . nu
    double d;       ///< max over the closure of |x - x0|
    double volume;  ///< |Omega|
    double surface; ///< |dOmega|; counting measure (2) for the interval
    int dimension;
};

DomainGeometry compute_geometry(const DomainShape& shape);

/// Conservative two-point flux between neighbouring nodes: the discrete
/// divergence at `left` receives +coefficient * (v[right] - v[left]).
struct Face {
    std::size_t left;
    std::size_t right;
    double coefficient;
};

/// Vertex-centred grid with control-volume quadrature weights.
///
/// Radial grids hold nodes r_i = i h on [0, R]; their cell weights are the
/// exact shell volumes between r_{i-1/2} and r_{i+1/2}, so the weights sum
/// to |Omega| for every resolution and the face list telescopes exactly.
/// Cartesian grids (interval, rectangle) use trapezoidal weights. Rectangle
/// nodes are stored x-fastest: index = i + (nx + 1) * j.
class SpatialGrid {
public:
    static constexpr int minimum_resolution = 8;

    const DomainGeometry& geometry() const { return geometry_; }
    int resolution() const { return resolution_; }
    std::size_t size() const { return cell_weights_.size(); }
    bool is_radial() const { return geometry_.shape.is_radial(); }
    int axis_count() const { return static_cast<int>(axes_.size()); }

    /// Node coordinates along one axis (radius for radial grids).
    std::span<const double> axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
    double spacing(int a) const { return spacing_.at(static_cast<std::size_t>(a)); }
    double min_spacing() const;

    std::span<const double> cell_weights() const { return cell_weights_; }
    std::span<const double> boundary_weights() const { return boundary_weights_; }
    std::span<const Face> faces() const { return faces_; }

    /// Node coordinate along axis `a` (radius for radial grids).
    double coordinate(std::size_t node, int a) const;
    double distance_from_origin(std::size_t node) const;
    bool on_boundary(std::size_t node) const { return boundary_weights_[node] > 0.0; }

    /// |grad V|^2 at every node from central differences.
    ///
    /// Boundary-normal components use `normal_derivative[node]` when it is
    /// non-empty (only its square matters), otherwise second-order one-sided
    /// differences. The radial derivative at the origin is zero by symmetry.
    std::vector<double> gradient_squared(std::span<const double> values,
                                         std::span<const double> normal_derivative = {}) const;

private:
    friend SpatialGrid build_grid(const DomainGeometry& geometry, int resolution);
    SpatialGrid(DomainGeometry geometry, int resolution) : geometry_(std::move(geometry)), resolution_(resolution) {}

    DomainGeometry geometry_;
    int resolution_;
    std::vector<std::vector<double>> axes_;
    std::vector<double> spacing_;
    std::vector<double> cell_weights_;
    std::vector<double> boundary_weights_;
    std::vector<Face> faces_;
};

SpatialGrid build_grid(const DomainGeometry& geometry, int resolution);

/// Sum of weight_i * value_i^exponent over the grid.
double integrate(const SpatialGrid& grid, std::span<const double> values, double exponent);

/// Same as integrate() but with the boundary weights.
double integrate_boundary(const SpatialGrid& grid, std::span<const double> values, double exponent);

} // namespace pmeb
