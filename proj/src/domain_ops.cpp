#include "rkhs/domain_ops.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "rkhs/detail/overloaded.hpp"
#include "rkhs/errors.hpp"

namespace rkhs {

using detail::overloaded;

namespace {

constexpr double kRotationTol = 1e-10;

template <class T>
const T& expect(const Center& c, const char* what) {
  if (const auto* p = std::get_if<T>(&c)) return *p;
  throw DomainError(std::string(what) + ": center variant mismatch (got " +
                    to_string(kind_of(c)) + ")");
}

double wrap_unit(double s) {
  double r = s - std::floor(s);
  return r == 0.0 ? 1.0 : r;
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0) u.col(2) *= -1.0;
  return u * v.transpose();
}

}  // namespace

CenterKind kind_of(const Center& c) {
  return std::visit(overloaded{[](const Scalar&) { return CenterKind::scalar; },
                               [](const Planar&) { return CenterKind::planar; },
                               [](const UnitInterval&) { return CenterKind::unit_interval; },
                               [](const Rotation3&) { return CenterKind::rotation; }},
                    c);
}

std::string to_string(CenterKind kind) {
  switch (kind) {
    case CenterKind::scalar: return "scalar";
    case CenterKind::planar: return "planar";
    case CenterKind::unit_interval: return "unit_interval";
    case CenterKind::rotation: return "rotation";
  }
  return "unknown";
}

void validate(const Center& c) {
  std::visit(overloaded{[](const Scalar& s) {
                          if (!std::isfinite(s.x)) throw DomainError("non-finite scalar center");
                        },
                        [](const Planar& p) {
                          if (!std::isfinite(p.x) || !std::isfinite(p.y))
                            throw DomainError("non-finite planar center");
                        },
                        [](const UnitInterval& u) {
                          if (!(u.t > 0.0 && u.t <= 1.0))
                            throw DomainError("unit-interval center outside (0,1]: " +
                                              std::to_string(u.t));
                        },
                        [](const Rotation3& r) {
                          const double orth =
                              (r.R.transpose() * r.R - Eigen::Matrix3d::Identity())
                                  .cwiseAbs()
                                  .maxCoeff();
                          const double det = r.R.determinant();
                          if (!(orth <= kRotationTol) || std::abs(det - 1.0) > kRotationTol)
                            throw DomainError("rotation center is not in SO(3)");
                        }},
             c);
}

std::size_t coordinate_count(CenterKind kind) {
  switch (kind) {
    case CenterKind::scalar:
    case CenterKind::unit_interval: return 1;
    case CenterKind::planar: return 2;
    case CenterKind::rotation: return 9;
  }
  return 0;
}

std::vector<double> coordinates(const Center& c) {
  return std::visit(
      overloaded{[](const Scalar& s) { return std::vector<double>{s.x}; },
                 [](const Planar& p) { return std::vector<double>{p.x, p.y}; },
                 [](const UnitInterval& u) { return std::vector<double>{u.t}; },
                 [](const Rotation3& r) {
                   std::vector<double> out(9);
                   for (int i = 0; i < 3; ++i)
                     for (int j = 0; j < 3; ++j) out[3 * i + j] = r.R(i, j);
                   return out;
                 }},
      c);
}

Center make_center(CenterKind kind, const std::vector<double>& coords) {
  if (coords.size() != coordinate_count(kind))
    throw DomainError("expected " + std::to_string(coordinate_count(kind)) +
                      " coordinates for a " + to_string(kind) + " center, got " +
                      std::to_string(coords.size()));
  switch (kind) {
    case CenterKind::scalar: return Scalar{coords[0]};
    case CenterKind::planar: return Planar{coords[0], coords[1]};
    case CenterKind::unit_interval: return UnitInterval{coords[0]};
    case CenterKind::rotation: {
      Rotation3 r;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.R(i, j) = coords[3 * i + j];
      return r;
    }
  }
  throw DomainError("unknown center kind");
}

double distance(const Center& a, const Center& b) {
  if (a.index() != b.index()) throw DomainError("distance: center variant mismatch");
  return std::visit(
      overloaded{[&](const Scalar& s) { return std::abs(s.x - std::get<Scalar>(b).x); },
                 [&](const Planar& p) {
                   const auto& q = std::get<Planar>(b);
                   return std::hypot(p.x - q.x, p.y - q.y);
                 },
                 [&](const UnitInterval& u) {
                   return std::abs(u.t - std::get<UnitInterval>(b).t);
                 },
                 [&](const Rotation3& r) { return (r.R - std::get<Rotation3>(b).R).norm(); }},
      a);
}

Rotation3 rotation_to(const Eigen::Vector3d& p) {
  const Eigen::Vector3d e0(0.0, 0.0, 1.0);
  Rotation3 out;
  out.R = Eigen::Quaterniond::FromTwoVectors(e0, p.normalized()).toRotationMatrix();
  return out;
}

Rotation3 rotation_about_z(double radians) {
  Rotation3 out;
  out.R = Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  return out;
}

Eigen::Vector3d sphere_point(const Rotation3& r) { return r.R.col(2); }

bool operator==(const DomainOp& a, const DomainOp& b) {
  if (a.index() != b.index()) return false;
  if (const auto* ca = std::get_if<CyclicSum>(&a)) return ca->sup == std::get<CyclicSum>(b).sup;
  return true;
}

std::string name_of(const DomainOp& op) {
  return std::visit(overloaded{[](const Translation1D&) { return "translation1d"; },
                               [](const CyclicSum&) { return "cyclic_sum"; },
                               [](const ComponentwiseProduct2D&) { return "componentwise_product2d"; },
                               [](const Translation2D&) { return "translation2d"; },
                               [](const UnitIntervalProduct&) { return "unit_interval_product"; },
                               [](const ModularSum01&) { return "modular_sum01"; },
                               [](const SphereRotation&) { return "sphere_rotation"; }},
                    op);
}

DomainOp make_domain_op(const std::string& name, double sup) {
  if (name == "translation1d") return Translation1D{};
  if (name == "cyclic_sum") {
    if (!(sup > 0.0)) throw DomainError("cyclic_sum requires sup > 0");
    return CyclicSum{sup};
  }
  if (name == "componentwise_product2d") return ComponentwiseProduct2D{};
  if (name == "translation2d") return Translation2D{};
  if (name == "unit_interval_product") return UnitIntervalProduct{};
  if (name == "modular_sum01") return ModularSum01{};
  if (name == "sphere_rotation") return SphereRotation{};
  throw DomainError("unknown domain op '" + name + "'");
}

CenterKind center_kind(const DomainOp& op) {
  return std::visit(
      overloaded{[](const Translation1D&) { return CenterKind::scalar; },
                 [](const CyclicSum&) { return CenterKind::scalar; },
                 [](const ComponentwiseProduct2D&) { return CenterKind::planar; },
                 [](const Translation2D&) { return CenterKind::planar; },
                 [](const UnitIntervalProduct&) { return CenterKind::unit_interval; },
                 [](const ModularSum01&) { return CenterKind::unit_interval; },
                 [](const SphereRotation&) { return CenterKind::rotation; }},
      op);
}

Center compose(const DomainOp& op, const Center& a, const Center& b) {
  return std::visit(
      overloaded{
          [&](const Translation1D&) -> Center {
            return Scalar{expect<Scalar>(a, "translation1d").x + expect<Scalar>(b, "translation1d").x};
          },
          [&](const CyclicSum& cs) -> Center {
            const double x = expect<Scalar>(a, "cyclic_sum").x;
            const double y = expect<Scalar>(b, "cyclic_sum").x;
            if (x < 0.0 || x > cs.sup || y < 0.0 || y > cs.sup)
              throw DomainError("cyclic_sum operand outside [0, sup]");
            const double s = x + y;
            return Scalar{s > cs.sup ? s - cs.sup : s};
          },
          [&](const ComponentwiseProduct2D&) -> Center {
            const auto& p = expect<Planar>(a, "componentwise_product2d");
            const auto& q = expect<Planar>(b, "componentwise_product2d");
            return Planar{p.x * q.x, p.y * q.y};
          },
          [&](const Translation2D&) -> Center {
            const auto& p = expect<Planar>(a, "translation2d");
            const auto& q = expect<Planar>(b, "translation2d");
            return Planar{p.x + q.x, p.y + q.y};
          },
          [&](const UnitIntervalProduct&) -> Center {
            return UnitInterval{expect<UnitInterval>(a, "unit_interval_product").t *
                                expect<UnitInterval>(b, "unit_interval_product").t};
          },
          [&](const ModularSum01&) -> Center {
            return UnitInterval{wrap_unit(expect<UnitInterval>(a, "modular_sum01").t +
                                          expect<UnitInterval>(b, "modular_sum01").t)};
          },
          [&](const SphereRotation&) -> Center {
            Rotation3 r;
            r.R = expect<Rotation3>(a, "sphere_rotation").R * expect<Rotation3>(b, "sphere_rotation").R;
            return r;
          }},
      op);
}

Center identity(const DomainOp& op) {
  return std::visit(overloaded{[](const Translation1D&) -> Center { return Scalar{0.0}; },
                               [](const CyclicSum&) -> Center { return Scalar{0.0}; },
                               [](const ComponentwiseProduct2D&) -> Center { return Planar{1.0, 1.0}; },
                               [](const Translation2D&) -> Center { return Planar{0.0, 0.0}; },
                               [](const UnitIntervalProduct&) -> Center { return UnitInterval{1.0}; },
                               [](const ModularSum01&) -> Center { return UnitInterval{1.0}; },
                               [](const SphereRotation&) -> Center { return Rotation3{}; }},
                    op);
}

Center canonicalize(const DomainOp& op, const Center& c) {
  if (kind_of(c) != center_kind(op))
    throw DomainError("canonicalize: center variant does not match " + name_of(op));
  return std::visit(
      overloaded{[&](const CyclicSum& cs) -> Center {
                   const double x = std::get<Scalar>(c).x;
                   if (x >= 0.0 && x <= cs.sup) return c;
                   return Scalar{x - cs.sup * std::floor(x / cs.sup)};
                 },
                 [&](const UnitIntervalProduct&) -> Center {
                   const double t = std::get<UnitInterval>(c).t;
                   if (t > 0.0 && t <= 1.0) return c;
                   return UnitInterval{std::clamp(t, 1e-12, 1.0)};
                 },
                 [&](const ModularSum01&) -> Center {
                   const double t = std::get<UnitInterval>(c).t;
                   if (t > 0.0 && t <= 1.0) return c;
                   return UnitInterval{wrap_unit(t)};
                 },
                 [&](const SphereRotation&) -> Center {
                   const auto& r = std::get<Rotation3>(c);
                   try {
                     validate(r);
                     return c;
                   } catch (const DomainError&) {
                     return Rotation3{nearest_rotation(r.R)};
                   }
                 },
                 [&](const auto&) -> Center { return c; }},
      op);
}

}  // namespace rkhs
