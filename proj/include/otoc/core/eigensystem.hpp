#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <complex>
#include <stdexcept>
#include <string>

#include "otoc/core/errors.hpp"
#include "otoc/core/operator.hpp"

namespace otoc::core {

/// Spectral decomposition of a Hermitian matrix, kept around so the same
/// generator can be exponentiated at many times.
struct HermitianEigensystem {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;

    explicit HermitianEigensystem(const Matrix& h, double hermitian_tol = 1e-10) {
        const double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
        if (dev > hermitian_tol) {
            throw std::invalid_argument("HermitianEigensystem: generator not Hermitian "
                                        "(max deviation " + std::to_string(dev) + ")");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
        if (solver.info() != Eigen::Success) {
            throw numerical_error("HermitianEigensystem: eigendecomposition failed");
        }
        eigenvalues  = solver.eigenvalues();
        eigenvectors = solver.eigenvectors();
    }

    /// exp(-i H t)
    Matrix unitary(double t) const {
        const Eigen::Index d = eigenvalues.size();
        Eigen::VectorXcd phases(d);
        for (Eigen::Index k = 0; k < d; ++k) {
            phases(k) = std::exp(Complex(0.0, -eigenvalues(k) * t));
        }
        return eigenvectors * phases.asDiagonal() * eigenvectors.adjoint();
    }
};

/// exp(-i H t) by Hermitian eigendecomposition; unitary to roundoff.
inline Matrix matexp_unitary_mat(const Matrix& h, double t, double hermitian_tol = 1e-10) {
    return HermitianEigensystem(h, hermitian_tol).unitary(t);
}

inline Operator matexp_unitary(const Operator& h, double t) {
    return Operator(matexp_unitary_mat(h.mat(), t), h.subsystem_dims());
}

} // namespace otoc::core
