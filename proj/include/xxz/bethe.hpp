#pragma once

#include <string>
#include <vector>

#include "xxz/contour.hpp"
#include "xxz/qtm.hpp"
#include "xxz/spectrum.hpp"

namespace xxz {

struct BetheState {
    std::vector<cplx> roots;  // reduced to Im in (-pi/2, pi/2]; roots at infinity have Re = +-inf
    int M = 0;
    int s = 0;
    int eigen_index = -1;
    cplx eigenvalue = 0.0;       // matrix eigenvalue
    double residual = 0.0;       // max |1 + a(lambda_j)|
    double tau_error = 0.0;      // |tau(0) - eigenvalue| / max(|eigenvalue|, tau_floor)
    double tq_condition = 0.0;   // condition number of the accepted collocation system
    double tq_radius = 0.0;
    bool admissible = true;
    bool multiplicity = false;   // coalescing roots (p > 0 equations are not solved)
    bool polished = false;
    std::vector<std::string> flags;

    RootMultiset multiset(double tol = 1e-7) const { return RootMultiset(roots, tol); }
};

// Coefficient functions of the eigenvalue formula: tau = a Q(xi + i zeta)/Q + d Q(xi - i zeta)/Q.
cplx tq_coefficient_a(cplx xi, const ChainParams& p);
cplx tq_coefficient_d(cplx xi, const ChainParams& p);

// Eigenvalue formula. Within 1e-9 of a root the value is taken as a circle mean (limit form);
// near_pole reports this.
cplx tau(cplx xi, const std::vector<cplx>& roots, const ChainParams& p, bool* near_pole = nullptr);

// Auxiliary function and its logarithmic derivative in xi.
cplx aux_function(cplx xi, const std::vector<cplx>& roots, const ChainParams& p);
cplx aux_log_derivative(cplx xi, const std::vector<cplx>& roots, const ChainParams& p);

std::vector<cplx> bae_residuals(const std::vector<cplx>& roots, const ChainParams& p);
double bae_residual(const std::vector<cplx>& roots, const ChainParams& p);

bool is_admissible(const std::vector<cplx>& roots, const ChainParams& p, double tol = 1e-11);

struct PolishResult {
    std::vector<cplx> roots;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Damped Newton on 1 + a(lambda_j) = 0 with the analytic Jacobian.
PolishResult polish_roots(std::vector<cplx> roots, const ChainParams& p, double tol = 1e-10,
                          int max_iter = 60);

// Leading-order dominant-state roots -aleph/N (1 + e^{i psi}) / (1 - e^{i psi}), psi = (2k-1) pi / N.
std::vector<cplx> dominant_seeds(const ChainParams& p);

struct ExtractOptions {
    std::vector<double> radius_factors{0.3, 0.2, 0.45};  // times zeta_m
    double max_condition = 1e12;
    double coalesce_tol = 1e-7;
    double polish_tol = 1e-10;
    double polish_max_shift = 1e-6;  // larger Newton moves are rejected
    double tau_floor = 1e-6;     // absolute floor for the tau(0) consistency check
    double string_tol = 1e-4;    // pairs closer than this to lambda +- i zeta flag "near_string"
    // An attempt is kept once both hold; otherwise the next collocation layout is tried.
    double accept_residual = 1e-10;
    double accept_tau = 1e-6;
    // |Re lambda| beyond which a fitted root is tested as a root at infinity, and the
    // relative null residual the reduced fit must reach.
    double far_root = 2.0;
    double infinity_fit_tol = 1e-10;
};

// True when two roots differ by +-i zeta (mod i pi) within tol.
bool has_near_string(const std::vector<cplx>& roots, const ChainParams& p, double tol);
// Roots at both +i zeta and -i zeta (mod i pi): tau(0) from roots is a 0 * inf form.
bool has_singular_pair(const std::vector<cplx>& roots, const ChainParams& p, double tol);

// TQ collocation from eigenvalue samples tau(xi_j) of one state.
BetheState roots_from_samples(const std::vector<cplx>& xi, const std::vector<cplx>& values, int M,
                              const ChainParams& p, const ExtractOptions& opt = {});

// Single eigenvector (sector basis) of t_q(0).
BetheState extract_roots(const Vec& psi, const SectorBasis& b, const ChainParams& p,
                         const ExtractOptions& opt = {});

// All states of sector m in rec (indices into rec). Eigenvectors are taken from t_q at a
// generic auxiliary point, where near-degeneracies of t_q(0) are lifted.
std::vector<BetheState> extract_sector(const SpectrumRecord& rec, int m, const ChainParams& p,
                                       const ExtractOptions& opt = {}, int jobs = 1);

struct HoleParticleSets {
    RootMultiset X_hat;   // zeros of 1 + a in D that are not Bethe roots
    RootMultiset Y_hat;   // Bethe roots outside the closed disc
    RootMultiset Y_sg;    // poles y - i sgn(pi - 2 zeta) zeta_m inside D
    RootMultiset inside;  // Bethe roots inside D
    int monodromy = 0;
    double winding_defect = 0.0;  // distance of the winding integral to the nearest integer
    double min_modulus = 0.0;     // min |1 + a| on the contour
    int zero_count = 0;
    double hole_residual = 0.0;

    // Y ⊕ Y_sg ⊖ X
    RootMultiset y_hat_total() const;
};

HoleParticleSets detect_sets(const BetheState& st, const ContourGrid& grid, const ChainParams& p);

// Y_kappa = Y_total ⊖ {kappa}^{s + |Y_total|}
RootMultiset y_kappa(const RootMultiset& y_total, int s, cplx kappa);

}  // namespace xxz
