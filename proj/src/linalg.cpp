#include "mac3/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>
#include <stdexcept>

#include "mac3/errors.hpp"

namespace mac3 {

CVector eigenvalues(const CMatrix& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("eigenvalues: matrix must be square");
    }
    if (!m.allFinite()) {
        throw NumericalError("eigenvalues: non-finite matrix entry");
    }
    Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "eigenvalues: QR iteration failed to converge for " << m.rows() << "x" << m.cols()
            << " matrix (max iterations " << solver.getMaxIterations() << ", norm " << m.norm()
            << ")";
        throw NumericalError(msg.str());
    }
    return solver.eigenvalues();
}

double spectral_radius(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return eigenvalues(m).cwiseAbs().maxCoeff();
}

CMatrix matrix_power(const CMatrix& m, int power) {
    if (power < 0) throw std::invalid_argument("matrix_power: negative power");
    CMatrix result = CMatrix::Identity(m.rows(), m.cols());
    CMatrix base = m;
    while (power > 0) {
        if (power & 1) result = result * base;
        power >>= 1;
        if (power > 0) base = base * base;
    }
    return result;
}

}  // namespace mac3
