#pragma once

#include <Eigen/Core>

namespace gkpca {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr int kEigenWorldVersion = EIGEN_WORLD_VERSION;
inline constexpr int kEigenMajorVersion = EIGEN_MAJOR_VERSION;
inline constexpr int kEigenMinorVersion = EIGEN_MINOR_VERSION;

}  // namespace gkpca
