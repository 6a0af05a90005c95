#include "topochain/topology.hpp"

#include <cmath>
#include <limits>

namespace topochain {

BZGrid make_bz_grid(int N_k) {
    if (N_k < 16) throw ValidationError("BZ grid requires N_k >= 16");
    BZGrid g;
    g.N_k = N_k;
    g.k.resize(N_k);
    for (int m = 0; m < N_k; ++m)
        g.k[m] = -M_PI + 2.0 * M_PI * m / N_k;
    return g;
}

BandData sample_bands(const BlochModel& model, const BZGrid& grid) {
    BandData out;
    out.grid = grid;
    const int N = grid.N_k;
    out.e_minus.resize(N);
    out.e_plus.resize(N);
    out.v_minus.resize(N);
    out.v_plus.resize(N);
    double gap = std::numeric_limits<double>::infinity();
    for (int m = 0; m < N; ++m) {
        const EigResult eig = eig_hermitian_2x2(model.bloch(grid.k[m]));
        out.e_minus[m] = eig.values[0];
        out.e_plus[m] = eig.values[1];
        out.v_minus[m] = eig.vectors.col(0);
        out.v_plus[m] = eig.vectors.col(1);
        gap = std::min(gap, eig.values[1] - eig.values[0]);
    }
    out.gap = gap;
    return out;
}

namespace {

// Frozen orthonormal basis of the plane perpendicular to n: pivot along the
// axis where |n| is smallest (first wins ties), project out n, complete with
// the cross product so that e1 x e2 = n.
void plane_basis(const Eigen::Vector3d& n, Eigen::Vector3d& e1, Eigen::Vector3d& e2) {
    int pivot = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(n[i]) < std::abs(n[pivot])) pivot = i;
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    p[pivot] = 1.0;
    e1 = (p - p.dot(n) * n).normalized();
    e2 = n.cross(e1);
}

}  // namespace

int winding_number(const BlochModel& model, const BZGrid& grid) {
    const Eigen::Vector3d n = model.chiral_axis();
    Eigen::Vector3d e1, e2;
    plane_basis(n, e1, e2);

    const int N = grid.N_k;
    std::vector<double> phi(N);
    for (int m = 0; m < N; ++m) {
        const Eigen::Vector3d d = model.dvec(grid.k[m]);
        if (d.norm() <= kGapTol)
            throw GaplessError("|d(k)| vanishes on the grid");
        phi[m] = std::atan2(d.dot(e2), d.dot(e1));
    }
    std::vector<double> increments(N);
    for (int m = 0; m < N; ++m)
        increments[m] = phi[(m + 1) % N] - phi[m];

    const double total = unwrap_phase_increments(increments);
    const double turns = total / (2.0 * M_PI);
    const int nu = static_cast<int>(std::lround(turns));
    if (std::abs(turns - nu) > 1e-6)
        throw Error("winding accumulated a non-integer turn count: " +
                    std::to_string(turns));
    return nu;
}

namespace {

cdouble wilson_product(const std::vector<Eigen::Vector2cd>& v) {
    const int N = static_cast<int>(v.size());
    cdouble W(1.0, 0.0);
    for (int m = 0; m < N; ++m) {
        const cdouble u = v[m].dot(v[(m + 1) % N]);  // <v_m | v_{m+1}>
        const double mag = std::abs(u);
        if (mag < kLinkOverlapTol)
            throw MeshError("link overlap vanished between adjacent k-points; raise N_k");
        W *= u / mag;
    }
    return W;
}

}  // namespace

cdouble band_holonomy(const BandData& bands, int which) {
    if (which != -1 && which != +1)
        throw ValidationError("band index must be -1 (lower) or +1 (upper)");
    return wilson_product(which == -1 ? bands.v_minus : bands.v_plus);
}

double zak_phase(const BandData& bands, int which) {
    if (!bands.gapped())
        throw GaplessError("Berry phase of a band needs a gapped spectrum");
    return principal_phase(-std::arg(band_holonomy(bands, which)));
}

BerryWindingReport check_berry_winding_relation(const BlochModel& model,
                                                const BZGrid& grid) {
    BerryWindingReport rep;
    rep.nu = winding_number(model, grid);
    const BandData bands = sample_bands(model, grid);
    rep.gamma_minus = zak_phase(bands, -1);
    rep.gamma_plus = zak_phase(bands, +1);
    rep.lhs_minus = std::polar(1.0, rep.gamma_minus);
    rep.lhs_plus = std::polar(1.0, rep.gamma_plus);
    rep.rhs_minus = cdouble(rep.nu % 2 == 0 ? 1.0 : -1.0, 0.0);  // e^{i pi nu}
    rep.rhs_plus = rep.rhs_minus;                                // e^{-i pi nu}
    rep.deviation = std::max(std::abs(rep.lhs_minus - rep.rhs_minus),
                             std::abs(rep.lhs_plus - rep.rhs_plus));
    rep.ok = rep.deviation <= 1e-6;
    return rep;
}

}  // namespace topochain
