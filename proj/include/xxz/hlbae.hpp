#pragma once

#include <string>
#include <vector>

#include "xxz/model.hpp"

namespace xxz {

struct HlbaeSolution {
    std::vector<cplx> y;
    int n_x = 0;
    int n_y = 0;
    int s = 0;
    double residual = 0.0;  // max_a |delta_a|
    int iterations = 0;
    bool converged = false;
    std::string seeds;  // provenance of the starting point
};

// delta_a of the spin-1 equations with n_x coincident holes at 0.
std::vector<cplx> hlbae1_delta(const std::vector<cplx>& y, int n_x, double zeta);
// Same with explicit hole positions.
std::vector<cplx> hlbae2_delta(const std::vector<cplx>& y, const std::vector<cplx>& x, double zeta);
double max_abs(const std::vector<cplx>& v);

struct HlbaeOptions {
    double tol = 1e-12;
    int max_iter = 100;
};

// Newton on log(1 + delta_a). Throws NewtonDivergence or JacobianSingular.
HlbaeSolution solve_hlbae1(int n_x, int s, const std::vector<cplx>& seeds, const ChainParams& p,
                           const HlbaeOptions& opt = {});
HlbaeSolution solve_hlbae2(const std::vector<cplx>& x_holes, int s, const std::vector<cplx>& seeds,
                           const ChainParams& p, const HlbaeOptions& opt = {});

// x_a = -2 J sin(zeta) / (T [(2 k_a + 1 + s) pi - sum_y theta(-y)]).
std::vector<cplx> hole_asymptotics(const std::vector<int>& k, const std::vector<cplx>& Y, int s,
                                   const ChainParams& p);
// Inverse: the real number 2k + 1 + s solving the above for a measured hole x.
double hole_mode(cplx x, const std::vector<cplx>& Y, const ChainParams& p);

// Large-T value of exp(-1/xi) exp(-f/T) for hole integers h and particle roots y.
// Checks the three constraints on y (ConstraintViolated, clause 1..3) and distinct h (clause 4).
cplx theorem2_ratio(const std::vector<int>& h, const std::vector<cplx>& y, int n_x, const ChainParams& p,
                    double rho);
// exp(-1/xi) = theorem2_ratio * exp(f/T).
cplx correlation_length_largeT(const std::vector<int>& h, const std::vector<cplx>& y, int n_x,
                               const ChainParams& p, double f, double rho);

// Catalog root: finite value or a tag for +-infinity (real part to +-infinity).
struct CatalogRoot {
    cplx y = 0.0;
    int infinity = 0;  // 0 finite, +1 or -1
};

struct SigmaInfinity {
    int n_x = 0;
    int n_y = 0;
    int s = 0;
    std::vector<std::vector<CatalogRoot>> members;
};

struct CatalogOptions {
    int starts = 400;
    unsigned seed = 12345;
    double re_range = 2.5;
    double dedupe_tol = 1e-7;
    int jobs = 1;
};

// Multi-start Newton over random seeds in the strip, plus admissible infinite-root configurations.
SigmaInfinity build_sigma_infinity(int n_x, int n_y, int s, const ChainParams& p, const CatalogOptions& opt = {});
// min over members and permutations of sum |y_a - y'_sigma(a)| (roots compared modulo i pi).
// Members with infinite roots are at infinite distance from any finite set. Throws EmptyCatalog.
double sigma_infinity_distance(const std::vector<cplx>& Y, const SigmaInfinity& catalog);

}  // namespace xxz
