#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "topochain/numerics.hpp"

namespace topochain {

enum class ModelKind { SSH, CL };

// Two-band chain in momentum space: H(k) = d0(k) I + d(k).sigma.
// SSH: intracell hopping J+alpha, intercell J-alpha, sublattices A/B.
//   d = ((J+alpha) + (J-alpha) cos k, (J-alpha) sin k, 0), d0 = 0, n = z.
// CL: horizontal hopping K e^{-i theta} (upper) / K e^{+i theta} (lower),
//   diagonal K, vertical rung M, control parameter alpha = -1 + M/(2K).
//   d = (-2K cos k - M, 0, 2K sin k sin theta), d0 = -2K cos k cos theta;
//   at theta = pi/2 the d0 term drops and n = y.
// Fourier convention a_j = L^{-1/2} sum_k e^{ikj} a_k, fixed project-wide.
struct BlochModel {
    ModelKind kind;
    double J = 1.0;
    double alpha = 0.0;
    double K = 1.0;
    double theta = 0.0;
    double M = 0.0;

    double d0(double k) const;
    Eigen::Vector3d dvec(double k) const;
    Eigen::Matrix2cd bloch(double k) const;

    // Unit vector n with n.d(k) = 0 (Gamma = n.sigma anticommutes with H).
    // For the CL off theta = pi/2 no such axis exists: has_chiral_symmetry()
    // is false there and chiral_axis() throws.
    bool has_chiral_symmetry() const;
    Eigen::Vector3d chiral_axis() const;

    // The common tuning parameter: alpha itself for SSH, -1 + M/(2K) for CL.
    double control_alpha() const;
};

BlochModel ssh_bloch(double J, double alpha);
BlochModel cl_bloch(double K, double theta, double M);

// Hopping disorder t -> t (1 + w), w ~ U[-W, W], drawn from a deterministic
// seeded stream. Amplitudes that must stay equal for the chiral block
// condition share one draw (CL: the two horizontals of a bond, the two
// diagonals of a bond); everything else draws independently.
struct DisorderSpec {
    double W = 0.0;
    std::uint64_t seed = 0;
};

struct OpenChain {
    ModelKind kind;
    int L = 0;
    Eigen::MatrixXcd H;           // 2L x 2L, site index 2j + {0,1}
    std::vector<int> edge_sites;  // SSH: first A, last B; CL: both rails, both ends
    std::vector<int> bulk_sites;  // complement
    std::optional<DisorderSpec> disorder;
};

// Open boundaries: the cell L-1 -> L couplings are absent. L >= 4.
OpenChain build_open_chain(const BlochModel& model, int L,
                           std::optional<DisorderSpec> disorder = std::nullopt);

// Sorted spectrum of the periodic 2L x 2L chain; must agree with
// {eps_pm(2 pi m / L)} from the Bloch form. Validation oracle for the
// derived d-vectors.
std::vector<double> ring_spectrum_oracle(const BlochModel& model, int L);

}  // namespace topochain
