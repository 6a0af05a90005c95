#include "topochain/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace topochain {

namespace {

// cos(pi/2) evaluates to 6.1e-17; snap it so the d0 term of the CL vanishes
// identically at the chiral point instead of leaking a spurious 1e-16 trace.
double snapped_cos(double theta) {
    const double c = std::cos(theta);
    return std::abs(c) < 1e-15 ? 0.0 : c;
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite");
}

}  // namespace

double BlochModel::d0(double k) const {
    if (kind == ModelKind::SSH) return 0.0;
    return -2.0 * K * std::cos(k) * snapped_cos(theta);
}

Eigen::Vector3d BlochModel::dvec(double k) const {
    if (kind == ModelKind::SSH) {
        return {(J + alpha) + (J - alpha) * std::cos(k),
                (J - alpha) * std::sin(k), 0.0};
    }
    return {-2.0 * K * std::cos(k) - M, 0.0, 2.0 * K * std::sin(k) * std::sin(theta)};
}

Eigen::Matrix2cd BlochModel::bloch(double k) const {
    const double e0 = d0(k);
    const Eigen::Vector3d d = dvec(k);
    Eigen::Matrix2cd H;
    H << cdouble(e0 + d.z(), 0.0), cdouble(d.x(), -d.y()),
         cdouble(d.x(), d.y()), cdouble(e0 - d.z(), 0.0);
    return H;
}

bool BlochModel::has_chiral_symmetry() const {
    if (kind == ModelKind::SSH) return true;
    return snapped_cos(theta) == 0.0;  // otherwise d0(k) breaks the anticommutation
}

Eigen::Vector3d BlochModel::chiral_axis() const {
    if (!has_chiral_symmetry())
        throw ValidationError(
            "no chiral axis: the d0(k) term is nonzero away from theta = pi/2");
    if (kind == ModelKind::SSH) return {0.0, 0.0, 1.0};
    return {0.0, 1.0, 0.0};
}

double BlochModel::control_alpha() const {
    return kind == ModelKind::SSH ? alpha : -1.0 + M / (2.0 * K);
}

BlochModel ssh_bloch(double J, double alpha) {
    require_finite(J, "J");
    require_finite(alpha, "alpha");
    if (J + alpha < 0.0 || J - alpha < 0.0)
        throw ValidationError("SSH requires J + alpha >= 0 and J - alpha >= 0");
    BlochModel m;
    m.kind = ModelKind::SSH;
    m.J = J;
    m.alpha = alpha;
    return m;
}

BlochModel cl_bloch(double K, double theta, double M) {
    require_finite(K, "K");
    require_finite(theta, "theta");
    require_finite(M, "M");
    if (K <= 0.0) throw ValidationError("CL requires K > 0");
    if (theta < -M_PI / 2 || theta > M_PI / 2)
        throw ValidationError("CL requires theta in [-pi/2, pi/2]");
    if (M < 0.0) throw ValidationError("CL requires M >= 0");
    BlochModel m;
    m.kind = ModelKind::CL;
    m.K = K;
    m.theta = theta;
    m.M = M;
    m.alpha = -1.0 + M / (2.0 * K);
    return m;
}

namespace {

double uniform_pm(std::mt19937_64& rng, double W) {
    // 53-bit mantissa to [0,1), then stretch to [-W, W). Hand-rolled so the
    // stream is identical across standard libraries.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return W * (2.0 * u - 1.0);
}

// SSH amplitudes: intra[j] couples (j,A)-(j,B), inter[j] couples (j,B)-(j+1,A).
void fill_ssh(Eigen::MatrixXcd& H, int L, bool periodic,
              const std::vector<double>& intra, const std::vector<double>& inter) {
    for (int j = 0; j < L; ++j) {
        H(2 * j, 2 * j + 1) += intra[j];
        H(2 * j + 1, 2 * j) += intra[j];
    }
    const int bonds = periodic ? L : L - 1;
    for (int j = 0; j < bonds; ++j) {
        const int jp = (j + 1) % L;
        H(2 * jp, 2 * j + 1) += inter[j];
        H(2 * j + 1, 2 * jp) += inter[j];
    }
}

// CL amplitudes per bond j -> j+1: horizontal pair -K e^{-i theta} (upper) /
// -K e^{+i theta} (lower) scaled by horiz[j], diagonal pair -K scaled by
// diag[j]; rung -M at cell j scaled by rung[j].
void fill_cl(Eigen::MatrixXcd& H, int L, bool periodic, double K, double theta,
             double M, const std::vector<double>& rung,
             const std::vector<double>& horiz, const std::vector<double>& diag) {
    const cdouble hop_up = -K * cdouble(snapped_cos(theta), -std::sin(theta));
    const cdouble hop_dn = std::conj(hop_up);
    for (int j = 0; j < L; ++j) {
        H(2 * j, 2 * j + 1) += -M * rung[j];
        H(2 * j + 1, 2 * j) += -M * rung[j];
    }
    const int bonds = periodic ? L : L - 1;
    for (int j = 0; j < bonds; ++j) {
        const int jp = (j + 1) % L;
        H(2 * jp, 2 * j) += hop_up * horiz[j];
        H(2 * j, 2 * jp) += std::conj(hop_up) * horiz[j];
        H(2 * jp + 1, 2 * j + 1) += hop_dn * horiz[j];
        H(2 * j + 1, 2 * jp + 1) += std::conj(hop_dn) * horiz[j];
        H(2 * jp + 1, 2 * j) += -K * diag[j];
        H(2 * j, 2 * jp + 1) += -K * diag[j];
        H(2 * jp, 2 * j + 1) += -K * diag[j];
        H(2 * j + 1, 2 * jp) += -K * diag[j];
    }
}

Eigen::MatrixXcd build_chain_matrix(const BlochModel& model, int L, bool periodic,
                                    const DisorderSpec* disorder) {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * L, 2 * L);

    // Scale factors 1 + w per amplitude group. Amplitudes forced equal by the
    // chiral block condition share one draw (CL horizontals of a bond, CL
    // diagonals of a bond); the draw order below is frozen: SSH all intra then
    // all inter; CL all rungs then per bond horizontal, diagonal. W = 0 (or no
    // spec) touches no RNG so the matrix is bit-identical to the clean one.
    const int bonds = periodic ? L : L - 1;
    std::vector<double> g1(L, 1.0), g2(bonds, 1.0), g3(bonds, 1.0);
    if (disorder && disorder->W != 0.0) {
        if (disorder->W < 0.0) throw ValidationError("disorder strength W must be >= 0");
        std::mt19937_64 rng(disorder->seed);
        if (model.kind == ModelKind::SSH) {
            for (int j = 0; j < L; ++j) g1[j] = 1.0 + uniform_pm(rng, disorder->W);
            for (int j = 0; j < bonds; ++j) g2[j] = 1.0 + uniform_pm(rng, disorder->W);
        } else {
            for (int j = 0; j < L; ++j) g1[j] = 1.0 + uniform_pm(rng, disorder->W);
            for (int j = 0; j < bonds; ++j) {
                g2[j] = 1.0 + uniform_pm(rng, disorder->W);
                g3[j] = 1.0 + uniform_pm(rng, disorder->W);
            }
        }
    }

    if (model.kind == ModelKind::SSH) {
        std::vector<double> intra(L), inter(bonds);
        for (int j = 0; j < L; ++j) intra[j] = (model.J + model.alpha) * g1[j];
        for (int j = 0; j < bonds; ++j) inter[j] = (model.J - model.alpha) * g2[j];
        fill_ssh(H, L, periodic, intra, inter);
    } else {
        fill_cl(H, L, periodic, model.K, model.theta, model.M, g1, g2, g3);
    }
    return H;
}

}  // namespace

OpenChain build_open_chain(const BlochModel& model, int L,
                           std::optional<DisorderSpec> disorder) {
    if (L < 4) throw ValidationError("open chain requires L >= 4 cells");
    OpenChain chain;
    chain.kind = model.kind;
    chain.L = L;
    chain.disorder = disorder;
    const DisorderSpec* spec = disorder ? &*disorder : nullptr;
    chain.H = build_chain_matrix(model, L, false, spec);

    if (model.kind == ModelKind::SSH)
        chain.edge_sites = {0, 2 * L - 1};
    else
        chain.edge_sites = {0, 1, 2 * L - 2, 2 * L - 1};
    chain.bulk_sites.reserve(2 * L - chain.edge_sites.size());
    for (int i = 0; i < 2 * L; ++i)
        if (std::find(chain.edge_sites.begin(), chain.edge_sites.end(), i) ==
            chain.edge_sites.end())
            chain.bulk_sites.push_back(i);
    return chain;
}

std::vector<double> ring_spectrum_oracle(const BlochModel& model, int L) {
    if (L < 4) throw ValidationError("ring oracle requires L >= 4 cells");
    const Eigen::MatrixXcd H = build_chain_matrix(model, L, true, nullptr);
    const EigResult eig = eig_hermitian(H);
    return {eig.values.data(), eig.values.data() + eig.values.size()};
}

}  // namespace topochain
