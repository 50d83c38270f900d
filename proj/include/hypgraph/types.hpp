#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace hypgraph {

using Real = double;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;

constexpr Real kPi = 3.14159265358979323846;

/// Invalid geometry or out-of-contract input (CLI exit code 2).
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// An iteration failed to converge or a residual check failed (CLI exit code 1).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hypgraph
