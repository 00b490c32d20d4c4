#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace holofisher {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Holonomic vector C = (c~, d1 c~, d2 c~, d3 c~) transported by the
/// Pfaffian system.
using CVector = Eigen::Vector4d;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

/// Requested evaluation sits on the singular locus of the Pfaffian system.
class SingularLocusError : public Error {
public:
  using Error::Error;
};

/// A transport segment crosses (or comes too close to) the singular locus.
/// `t_cross` is the offending parameter on the segment [0,1].
class PathSingularError : public Error {
public:
  PathSingularError(const std::string& what, double t) : Error(what), t_cross(t) {}
  double t_cross;
};

/// Data too concentrated for the direct pipeline (see fit()).
class ConcentrationError : public Error {
public:
  using Error::Error;
};

}  // namespace holofisher
