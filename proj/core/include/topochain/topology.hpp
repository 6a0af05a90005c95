#pragma once

#include <vector>

#include <Eigen/Dense>

#include "topochain/models.hpp"

namespace topochain {

inline constexpr double kGapTol = 1e-8;      // below this the spectrum counts as gapless
inline constexpr double kLinkOverlapTol = 1e-12;
inline constexpr int kDefaultNk = 512;

// Uniform closed discretization of the loop k in [-pi, pi]: N_k distinct
// points k_m = -pi + 2 pi m / N_k; the endpoint pi is the first point again.
struct BZGrid {
    int N_k = 0;
    std::vector<double> k;  // size N_k; wraparound by index mod N_k

    double spacing() const { return 2.0 * M_PI / N_k; }
};

BZGrid make_bz_grid(int N_k);  // N_k >= 16

// Spectral data of H(k) on the grid under the deterministic gauge.
struct BandData {
    BZGrid grid;
    std::vector<double> e_minus, e_plus;
    std::vector<Eigen::Vector2cd> v_minus, v_plus;
    double gap = 0.0;  // min_k (e_plus - e_minus)

    bool gapped() const { return gap > kGapTol; }
};

BandData sample_bands(const BlochModel& model, const BZGrid& grid);

// Revolutions of d(k) around the origin in the plane perpendicular to the
// chiral axis. Exact integer; the plane basis comes from the smallest-
// component pivot rule so the sign convention is frozen.
// GaplessError if min_k |d| <= kGapTol, MeshError if the mesh is too coarse.
int winding_number(const BlochModel& model, const BZGrid& grid);

// Closed Wilson product prod_m u_m/|u_m|, u_m = <mu_j(k_m)|mu_j(k_{m+1})>,
// of one band's frame; `which` = -1 (lower) or +1 (upper). Gauge-invariant
// because the loop closes. MeshError on a vanishing link.
cdouble band_holonomy(const BandData& bands, int which);

// Discrete Berry phase of one band over the closed loop:
//   gamma_j = -arg band_holonomy, principal value in (-pi, pi].
double zak_phase(const BandData& bands, int which);

// Both sides of e^{i gamma_-} = e^{i pi nu} and e^{i gamma_+} = e^{-i pi nu}.
struct BerryWindingReport {
    int nu = 0;
    double gamma_minus = 0.0, gamma_plus = 0.0;
    cdouble lhs_minus, rhs_minus, lhs_plus, rhs_plus;
    double deviation = 0.0;  // max of the two |lhs - rhs|
    bool ok = false;         // deviation <= 1e-6
};

BerryWindingReport check_berry_winding_relation(const BlochModel& model, const BZGrid& grid);

}  // namespace topochain
