/// @file linalg.hpp
/// @brief Dense complex matrix helpers for symbol analysis.

#pragma once

#include <Eigen/Dense>

namespace mac3 {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Matrix3c = Eigen::Matrix3cd;

/// All eigenvalues of a general square complex matrix.
/// Throws NumericalError if the QR iteration does not converge.
CVector eigenvalues(const CMatrix& m);

/// max |lambda| over eigenvalues.
double spectral_radius(const CMatrix& m);

/// Integer matrix power by repeated squaring; power 0 gives the identity.
CMatrix matrix_power(const CMatrix& m, int power);

}  // namespace mac3
