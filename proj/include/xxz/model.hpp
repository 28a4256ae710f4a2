#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace xxz {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

enum class Errc {
    config,
    cut_evaluation,
    singular_eta,
    dimension_overflow,
    convergence_failure,
    gap_too_small,
    ill_conditioned_tq,
    multiplicity_detected,
    contour_through_zero,
    lower_bound_violated,
    no_convergence,
    monodromy_mismatch,
    ball_escape,
    newton_divergence,
    jacobian_singular,
    resonant_denominator,
    constraint_violated,
    empty_catalog,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);
    Errc code() const { return code_; }

private:
    Errc code_;
};

// Physical and discretisation parameters of the chain.
struct ChainParams {
    double J = 1.0;
    double zeta = pi / 7.0;
    double h = 0.0;
    double T = 100.0;
    int N = 5;
    int L = 10;

    cplx eta() const { return -I * zeta; }
    cplx aleph() const { return -I * J * std::sin(zeta) / T; }
    double delta() const { return std::cos(zeta); }
    double zeta_m() const;

    // Throws Error(Errc::config) when an invariant is broken.
    void validate() const;
    // Advisory: true when zeta/pi is close to a rational with small denominator.
    bool near_rational_zeta(int max_denominator = 12, double tol = 1e-9) const;
};

// Principal logarithm with arg in [-pi, pi).
cplx ln_p(cplx z);

// Reduce modulo i*pi into the strip Im in (-pi/2, pi/2].
cplx reduce_strip(cplx lam);

// True when a and b agree modulo i*pi within tol.
bool same_mod_ipi(cplx a, cplx b, double tol = 1e-10);

inline constexpr double kIdentityTol = 1e-10;

// Multiset of complex points with signed multiplicities.
class RootMultiset {
public:
    struct Entry {
        cplx value;
        int mult;
    };

    RootMultiset() = default;
    explicit RootMultiset(const std::vector<cplx>& simple, double tol = kIdentityTol);

    static RootMultiset repeated(cplx x, int n, double tol = kIdentityTol);

    void add(cplx value, int mult);

    RootMultiset& operator+=(const RootMultiset& other);
    RootMultiset& operator-=(const RootMultiset& other);
    friend RootMultiset operator+(RootMultiset a, const RootMultiset& b) { return a += b; }
    friend RootMultiset operator-(RootMultiset a, const RootMultiset& b) { return a -= b; }

    // Weighted cardinality.
    int cardinality() const;
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    // Values repeated according to (positive) multiplicity.
    std::vector<cplx> expanded() const;

    cplx sum(const std::function<cplx(cplx)>& f) const;
    cplx prod(const std::function<cplx(cplx)>& f) const;

    double tol() const { return tol_; }

private:
    std::vector<Entry> entries_;
    double tol_ = kIdentityTol;
};

double zeta_m(double zeta);

// Roots at +-infinity are stored with an infinite real part (imaginary part 0).
inline bool is_infinite_root(cplx l) { return std::isinf(l.real()); }
cplx infinite_root(int side);
// sinh(a + l) / sinh(b + l); for l at +-infinity the limit exp(+-(a - b)).
cplx sinh_ratio(cplx a, cplx b, cplx l);
// sinh(i zeta + d) / sinh(i zeta - d), limit -exp(+-2 i zeta) at d = +-infinity; 1 when d is
// undefined (two roots at the same infinity).
cplx scattering_factor(cplx d, double zeta);

enum class CutPolicy { plus_boundary, throw_on_cut };

// theta on the strip, extended i*pi periodically; cuts at R+ +- i zeta_m + i pi Z.
cplx theta(cplx lam, double zeta, CutPolicy policy = CutPolicy::plus_boundary,
           bool* on_cut = nullptr);
cplx theta_plus(cplx lam, double zeta);

// K = theta' / (2 pi).
cplx kernel_K(cplx xi, double zeta);
// d K / d xi.
cplx kernel_K_prime(cplx xi, double zeta);

cplx e0(cplx xi, const ChainParams& p);
cplx e0_prime(cplx xi, const ChainParams& p);

}  // namespace xxz
