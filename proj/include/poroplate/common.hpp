#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace poroplate {

using Real = double;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Exit code classes used by the command line front end.
enum class ErrorClass { Input = 2, Numerical = 3, Io = 4 };

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what, ErrorClass cls)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)), cls_(cls) {}
  const std::string& kind() const { return kind_; }
  ErrorClass error_class() const { return cls_; }

 private:
  std::string kind_;
  ErrorClass cls_;
};

#define POROPLATE_ERROR(Name, Cls)                                        \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what = "") : Error(#Name, what, Cls) {} \
  };

POROPLATE_ERROR(EmptySolid, ErrorClass::Input)
POROPLATE_ERROR(DisconnectedSolid, ErrorClass::Input)
POROPLATE_ERROR(DisconnectedFluid, ErrorClass::Input)
POROPLATE_ERROR(BadMask, ErrorClass::Input)
POROPLATE_ERROR(BadTensor, ErrorClass::Input)
POROPLATE_ERROR(OverlappingIntervals, ErrorClass::Input)
POROPLATE_ERROR(GapInColumn, ErrorClass::Input)
POROPLATE_ERROR(UnknownPhase, ErrorClass::Input)
POROPLATE_ERROR(OverlappingRegions, ErrorClass::Input)
POROPLATE_ERROR(RegionGap, ErrorClass::Input)
POROPLATE_ERROR(MinimumGrid, ErrorClass::Input)
POROPLATE_ERROR(AlignmentError, ErrorClass::Input)
POROPLATE_ERROR(BadGrid, ErrorClass::Input)
POROPLATE_ERROR(MissingCorrector, ErrorClass::Input)
POROPLATE_ERROR(MissingTimeDerivative, ErrorClass::Input)
POROPLATE_ERROR(NoFluid, ErrorClass::Input)
POROPLATE_ERROR(SingularSystem, ErrorClass::Numerical)
POROPLATE_ERROR(IncompatibleCellProblem, ErrorClass::Numerical)
POROPLATE_ERROR(NonFiniteState, ErrorClass::Numerical)
POROPLATE_ERROR(ZeroStrain, ErrorClass::Numerical)
POROPLATE_ERROR(IoError, ErrorClass::Io)

#undef POROPLATE_ERROR

class SchemaError : public Error {
 public:
  SchemaError(std::string path, std::string reason)
      : Error("SchemaError", path + ": " + reason, ErrorClass::Input),
        path_(std::move(path)), reason_(std::move(reason)) {}
  const std::string& path() const { return path_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string path_, reason_;
};

class UnknownKey : public Error {
 public:
  explicit UnknownKey(std::string path)
      : Error("UnknownKey", path, ErrorClass::Input), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace poroplate
