#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace rkhs {

// ---------------------------------------------------------------------------
// Kernel centers
// ---------------------------------------------------------------------------

struct Scalar {
  double x = 0.0;
};

struct Planar {
  double x = 0.0;
  double y = 0.0;
};

/// A point of (0, 1].
struct UnitInterval {
  double t = 1.0;
};

/// An element of SO(3). Sphere points are represented by the rotation that
/// carries the base point e0 = (0, 0, 1) onto them.
struct Rotation3 {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
};

using Center = std::variant<Scalar, Planar, UnitInterval, Rotation3>;

enum class CenterKind { scalar, planar, unit_interval, rotation };

CenterKind kind_of(const Center& c);
std::string to_string(CenterKind kind);

/// Throws DomainError when the center violates its variant invariant
/// ((0,1] for unit-interval points, orthogonality/det for rotations).
void validate(const Center& c);

/// Flat coordinates: 1 for scalars and unit-interval points, 2 for planar
/// points, 9 (row-major) for rotations.
std::vector<double> coordinates(const Center& c);
Center make_center(CenterKind kind, const std::vector<double>& coords);
std::size_t coordinate_count(CenterKind kind);

/// Variant metric used for merging: Euclidean for vector centers, Frobenius
/// norm of the difference for rotations.
double distance(const Center& a, const Center& b);

/// Rotation taking e0 = (0,0,1) onto the unit vector p along the shortest arc.
/// The lift from S^2 to SO(3) is not unique; this is one fixed choice.
Rotation3 rotation_to(const Eigen::Vector3d& p);
Rotation3 rotation_about_z(double radians);
Eigen::Vector3d sphere_point(const Rotation3& r);

// ---------------------------------------------------------------------------
// Domain operations (monoid/group products on centers)
// ---------------------------------------------------------------------------

struct Translation1D {};
/// Sum on [0, sup] with a single wrap-around subtraction.
struct CyclicSum {
  double sup = 1.0;
};
struct ComponentwiseProduct2D {};
struct Translation2D {};
struct UnitIntervalProduct {};
/// Sum modulo 1 with representative 0 mapped to 1, so values stay in (0, 1].
struct ModularSum01 {};
struct SphereRotation {};

using DomainOp = std::variant<Translation1D, CyclicSum, ComponentwiseProduct2D,
                              Translation2D, UnitIntervalProduct, ModularSum01,
                              SphereRotation>;

bool operator==(const DomainOp& a, const DomainOp& b);

std::string name_of(const DomainOp& op);
DomainOp make_domain_op(const std::string& name, double sup = 1.0);

/// The center variant every operand of `op` must have.
CenterKind center_kind(const DomainOp& op);

/// Returns a ∘ b. Throws DomainError on variant mismatch, or for CyclicSum
/// when an operand lies outside [0, sup].
Center compose(const DomainOp& op, const Center& a, const Center& b);

/// Two-sided identity δ. For ModularSum01 the identity class {0, 1} is
/// represented by 1.
Center identity(const DomainOp& op);

/// Maps a center that drifted out of its set (e.g. after a parameter update)
/// back into it: wraps for cyclic/modular sums, clamps unit-interval products,
/// re-orthonormalizes rotations that violate the invariant.
Center canonicalize(const DomainOp& op, const Center& c);

}  // namespace rkhs
