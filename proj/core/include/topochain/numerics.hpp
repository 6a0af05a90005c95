#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "topochain/errors.hpp"

namespace topochain {

using cdouble = std::complex<double>;

inline constexpr double kHermTol = 1e-12;        // ||M - M^dag||_max on construction
inline constexpr double kEigResidualTol = 1e-10; // ||HU - U diag|| relative to ||H||_max
inline constexpr double kDegeneracyTol = 1e-9;   // scaled by max(1, ||H||_max)
inline constexpr double kUnwrapTrust = 3.041592653589793; // pi - 0.1

// Eigenvalues ascending, eigenvectors the matching unitary columns.
struct EigResult {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};

bool is_hermitian(const Eigen::MatrixXcd& H, double tol = kHermTol);

// Closed-form 2x2 Hermitian eigensolver. Gauge: in each column the component
// of largest modulus is made real positive (first index wins ties), so
// results are reproducible even when the first component vanishes.
EigResult eig_hermitian_2x2(const Eigen::Matrix2cd& H);

// Dense N x N Hermitian eigensolver, N <= 4096. Same gauge per column;
// residual and unitarity are checked before returning.
EigResult eig_hermitian(const Eigen::MatrixXcd& H);

// 1/(e^{beta(eps-mu)} + 1), overflow-safe: exact 0 / 1 past |x| > 700,
// exact 1/2 at beta = 0 or eps = mu. Throws ValidationError for beta < 0.
double fermi_weight(double eps, double mu, double beta);

// Fold each raw increment into (-pi, pi] and sum. An increment with
// |inc| >= pi - 0.1 means the mesh cannot distinguish the two branches:
// MeshError.
double unwrap_phase_increments(const std::vector<double>& increments);

// Principal value in (-pi, pi].
double principal_phase(double phi);

}  // namespace topochain
