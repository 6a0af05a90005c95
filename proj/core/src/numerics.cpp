#include "topochain/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace topochain {

bool is_hermitian(const Eigen::MatrixXcd& H, double tol) {
    if (H.rows() != H.cols()) return false;
    return (H - H.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

namespace {

// Largest-modulus component made real positive; first index wins ties.
void fix_column_gauge(Eigen::Ref<Eigen::VectorXcd> col) {
    Eigen::Index pivot = 0;
    double best = std::abs(col[0]);
    for (Eigen::Index i = 1; i < col.size(); ++i) {
        const double a = std::abs(col[i]);
        if (a > best) {
            best = a;
            pivot = i;
        }
    }
    if (best == 0.0) return;
    const cdouble phase = col[pivot] / best;
    col /= phase;
    col[pivot] = cdouble(std::abs(col[pivot]), 0.0);  // kill residual imaginary dust
}

void require_hermitian(const Eigen::MatrixXcd& H) {
    if (H.rows() != H.cols()) throw ValidationError("matrix is not square");
    if (!is_hermitian(H))
        throw ValidationError("matrix is not Hermitian within 1e-12");
}

}  // namespace

EigResult eig_hermitian_2x2(const Eigen::Matrix2cd& H) {
    require_hermitian(H);

    const double a = H(0, 0).real();
    const double c = H(1, 1).real();
    const cdouble b = H(0, 1);

    const double half_tr = 0.5 * (a + c);
    const double dz = 0.5 * (a - c);
    const double r = std::hypot(dz, std::abs(b));

    EigResult out;
    out.values.resize(2);
    out.values[0] = half_tr - r;
    out.values[1] = half_tr + r;
    out.vectors.resize(2, 2);

    if (r == 0.0) {  // scalar matrix, any orthonormal basis works
        out.vectors.setIdentity();
        return out;
    }

    // Two algebraically equivalent null vectors of (H - lambda_- I); pick the
    // one whose leading term adds instead of cancels.
    Eigen::Vector2cd lower;
    if (dz >= 0.0)
        lower << -b, cdouble(dz + r, 0.0);
    else
        lower << cdouble(dz - r, 0.0), std::conj(b);
    lower.normalize();

    Eigen::Vector2cd upper;
    upper << -std::conj(lower[1]), std::conj(lower[0]);

    out.vectors.col(0) = lower;
    out.vectors.col(1) = upper;
    fix_column_gauge(out.vectors.col(0));
    fix_column_gauge(out.vectors.col(1));
    return out;
}

EigResult eig_hermitian(const Eigen::MatrixXcd& H) {
    require_hermitian(H);
    if (H.rows() > 4096)
        throw ValidationError("dense solver limited to N <= 4096");

    // Symmetrize away the sub-tolerance asymmetry before factorizing.
    const Eigen::MatrixXcd Hs = 0.5 * (H + H.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Hs);
    if (solver.info() != Eigen::Success)
        throw Error("Hermitian eigensolver failed to converge");

    EigResult out;
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    for (Eigen::Index j = 0; j < out.vectors.cols(); ++j)
        fix_column_gauge(out.vectors.col(j));

    const double scale = std::max(1e-300, Hs.cwiseAbs().maxCoeff());
    const double residual =
        (Hs * out.vectors - out.vectors * out.values.asDiagonal())
            .cwiseAbs()
            .maxCoeff();
    if (residual > kEigResidualTol * scale)
        throw Error("eigendecomposition residual " + std::to_string(residual) +
                    " exceeds bound " + std::to_string(kEigResidualTol * scale));
    const double unitarity =
        (out.vectors.adjoint() * out.vectors -
         Eigen::MatrixXcd::Identity(H.rows(), H.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (unitarity > 1e-10)
        throw Error("eigenvector matrix lost unitarity: " + std::to_string(unitarity));
    return out;
}

double fermi_weight(double eps, double mu, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ValidationError("fermi_weight requires finite beta >= 0");
    if (beta == 0.0) return 0.5;
    const double x = beta * (eps - mu);
    if (x > 700.0) return 0.0;
    if (x < -700.0) return 1.0;
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (std::exp(x) + 1.0);
}

double principal_phase(double phi) {
    double r = std::remainder(phi, 2.0 * M_PI);
    if (r <= -M_PI) r += 2.0 * M_PI;
    return r;
}

double unwrap_phase_increments(const std::vector<double>& increments) {
    double total = 0.0;
    for (double raw : increments) {
        const double inc = principal_phase(raw);
        if (std::abs(inc) >= kUnwrapTrust)
            throw MeshError("phase increment " + std::to_string(inc) +
                            " too close to the branch cut; mesh too coarse, raise N_k");
        total += inc;
    }
    return total;
}

}  // namespace topochain
