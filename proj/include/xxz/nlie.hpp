#pragma once

#include <functional>
#include <string>
#include <vector>

#include "xxz/bethe.hpp"
#include "xxz/contour.hpp"
#include "xxz/model.hpp"

namespace xxz {

// A_inf(xi) = -i pi s + i sum_{y in Y_kappa} theta(xi - y)
cplx a_infinity(cplx xi, const RootMultiset& y_kappa_set, int s, double zeta);
cplx a_infinity_prime(cplx xi, const RootMultiset& y_kappa_set, double zeta);

// Checks |1 + exp(A_inf)| >= rho / 2 on the nodes; throws LowerBoundViolated. Returns the minimum.
double check_lower_bound(const ContourGrid& grid, const RootMultiset& y_kappa_set, int s, double zeta,
                         double rho);

// w_N(xi) and its Trotter limit 2 J sin^2 zeta / (T sinh xi sinh(xi - i zeta)).
cplx driving_wN(cplx xi, const ChainParams& p);
// varpi = h - T w_N at finite N, e_0 in the Trotter limit.
cplx varpi(cplx xi, const ChainParams& p, bool trotter_limit);

struct NlieConfig {
    bool trotter_limit = true;
    RootMultiset X;     // holes
    RootMultiset Y;     // particles
    RootMultiset Y_sg;  // singular companions inside D
    int s = 0;
    double damping = 0.0;  // 0 selects 1 at T >= 100 and 0.5 below
    double tol = 1e-13;
    int max_iter = 500;
    double T_min = 20.0;
    bool check_ball = true;

    // Y ⊕ Y_sg ⊖ X
    RootMultiset y_total() const;
    int expected_monodromy() const;
};

struct NlieSolution {
    ContourGrid grid;
    bool trotter_limit = true;
    int N = 0;
    double T = 0.0;
    int s = 0;
    RootMultiset X, Y, Y_sg;
    RootMultiset y_kappa;
    std::vector<cplx> A;   // A (or A-hat) per node
    std::vector<cplx> Ln;  // continued logarithm of 1 + exp(A) from kappa
    std::vector<cplx> xi;  // fixed-point unknown T (A - A_inf) + varpi
    int monodromy = 0;
    int iterations = 0;
    double final_delta = 0.0;
    double ball_radius = 0.0;  // 2 sup |chi_inf| over the nodes
    double xi_norm = 0.0;
};

// Continued logarithm Ln[1 + e^A] along the circle from kappa. Returns the winding in *monodromy.
std::vector<cplx> continued_log(const ContourGrid& grid, const std::vector<cplx>& A, int* monodromy);

// \oint K(lam - u) F(u) du where F jumps by 2 pi i m across kappa (F = periodic + i m arg(u / kappa)).
cplx kernel_integral(const ContourGrid& grid, const std::vector<cplx>& F, int m, cplx lam, double zeta);

// Damped Picard iteration of the fixed-point form. Throws NoConvergence, MonodromyMismatch, BallEscape.
NlieSolution solve_nlie(const NlieConfig& cfg, const ChainParams& p, const ContourGrid& grid,
                        const std::vector<cplx>* xi_start = nullptr);

// A at an arbitrary point of the strip from the right-hand side of the equation.
cplx nlie_evaluate(const NlieSolution& sol, cplx lam, const ChainParams& p);

// chi_{N;eps} at the nodes.
std::vector<cplx> chi_nodes(const ContourGrid& grid, const RootMultiset& y_kappa_set, int s,
                            const ChainParams& p, bool trotter_limit);

struct FixedPointOperator {
    ContourGrid grid;
    ChainParams p;
    bool trotter_limit = true;
    int s = 0;
    RootMultiset y_kappa;
    std::vector<cplx> chi;
    std::vector<cplx> a_inf, a_inf_prime, varpi;
    double ball_radius = 0.0;

    static FixedPointOperator make(const NlieConfig& cfg, const ChainParams& p, const ContourGrid& grid);
    // O[xi] at the nodes; xi given by its nodal values (analytic on the disc).
    std::vector<cplx> apply(const std::vector<cplx>& xi) const;
};

// -f/T from a dominant-state Trotter-limit solution. Imaginary part in *imag_part.
double free_energy_over_T(const NlieSolution& sol, const ChainParams& p, double* imag_part = nullptr);
// f itself.
double free_energy(const NlieSolution& sol, const ChainParams& p);

// Eigenvalue from the integral representation; kappa is taken from the solution's grid.
cplx eigenvalue_from_nlie(const NlieSolution& sol, const ChainParams& p);

// Sup norm over the nodes.
double sup_norm(const std::vector<cplx>& v);

std::string nlie_to_json(const NlieSolution& sol, const ChainParams& p);

}  // namespace xxz
