#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace tacshade {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double distance(Vec3 a, Vec3 b) { return (a - b).norm(); }

/// Points in millimetres; `frame` names the coordinate frame ("sensor", "world", ...).
struct PointCloud {
  std::vector<Vec3> points;
  std::string frame = "sensor";

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// Row-major 3x3 matrix.
using Mat3 = std::array<double, 9>;

class RigidTransform {
 public:
  /// Identity.
  RigidTransform() = default;

  /// Throws Domain unless rotation is orthonormal (R^T R = I within 1e-9) with det +1.
  RigidTransform(const Mat3& rotation, Vec3 translation);

  static RigidTransform translation(Vec3 t) { return RigidTransform(identity_rotation(), t); }
  static RigidTransform rotation_z(double radians, Vec3 t = {});
  static Mat3 identity_rotation() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

  Vec3 apply(Vec3 p) const noexcept;
  RigidTransform inverse() const;

  const Mat3& rotation() const noexcept { return rotation_; }
  Vec3 translation() const noexcept { return translation_; }

 private:
  Mat3 rotation_ = identity_rotation();
  Vec3 translation_{};
};

}  // namespace tacshade
