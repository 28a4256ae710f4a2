#include "xxz/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace xxz {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::config: return "ConfigError";
    case Errc::cut_evaluation: return "CutEvaluation";
    case Errc::singular_eta: return "SingularEta";
    case Errc::dimension_overflow: return "DimensionOverflow";
    case Errc::convergence_failure: return "ConvergenceFailure";
    case Errc::gap_too_small: return "GapTooSmall";
    case Errc::ill_conditioned_tq: return "IllConditionedTQ";
    case Errc::multiplicity_detected: return "MultiplicityDetected";
    case Errc::contour_through_zero: return "ContourThroughZero";
    case Errc::lower_bound_violated: return "LowerBoundViolated";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::monodromy_mismatch: return "MonodromyMismatch";
    case Errc::ball_escape: return "BallEscape";
    case Errc::newton_divergence: return "NewtonDivergence";
    case Errc::jacobian_singular: return "JacobianSingular";
    case Errc::resonant_denominator: return "ResonantDenominator";
    case Errc::constraint_violated: return "ConstraintViolated";
    case Errc::empty_catalog: return "EmptyCatalog";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

double zeta_m(double zeta) { return std::min(zeta, pi - zeta); }

double ChainParams::zeta_m() const { return xxz::zeta_m(zeta); }

void ChainParams::validate() const {
    if (!(zeta > 0.0 && zeta < pi)) throw Error(Errc::config, "zeta must lie in (0, pi)");
    if (!(T > 0.0)) throw Error(Errc::config, "T must be positive");
    if (N < 1) throw Error(Errc::config, "N must be >= 1");
    if (L < 2 || L % 2 != 0) throw Error(Errc::config, "L must be even and >= 2");
    if (!std::isfinite(J) || !std::isfinite(h)) throw Error(Errc::config, "J and h must be finite");
}

bool ChainParams::near_rational_zeta(int max_denominator, double tol) const {
    const double r = zeta / pi;
    for (int q = 1; q <= max_denominator; ++q) {
        const double pq = std::round(r * q);
        if (std::abs(r * q - pq) < tol * q) return true;
    }
    return false;
}

cplx ln_p(cplx z) {
    double a = std::arg(z);
    if (a >= pi) a = -pi;
    return {std::log(std::abs(z)), a};
}

cplx reduce_strip(cplx lam) {
    double y = lam.imag();
    // bring y into (-pi/2, pi/2]
    double k = std::ceil((y - pi / 2) / pi);
    y -= k * pi;
    if (y <= -pi / 2) y += pi;
    return {lam.real(), y};
}

bool same_mod_ipi(cplx a, cplx b, double tol) {
    const cplx d = reduce_strip(a - b);
    if (std::abs(d) < tol) return true;
    // reduced difference near the strip edge
    return std::abs(d - I * pi) < tol;
}

RootMultiset::RootMultiset(const std::vector<cplx>& simple, double tol) : tol_(tol) {
    for (cplx v : simple) add(v, 1);
}

RootMultiset RootMultiset::repeated(cplx x, int n, double tol) {
    RootMultiset r;
    r.tol_ = tol;
    r.add(x, n);
    return r;
}

void RootMultiset::add(cplx value, int mult) {
    if (mult == 0) return;
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        if (same_mod_ipi(it->value, value, tol_)) {
            it->mult += mult;
            if (it->mult == 0) entries_.erase(it);
            return;
        }
    }
    entries_.push_back({value, mult});
}

RootMultiset& RootMultiset::operator+=(const RootMultiset& other) {
    for (const auto& e : other.entries_) add(e.value, e.mult);
    return *this;
}

RootMultiset& RootMultiset::operator-=(const RootMultiset& other) {
    for (const auto& e : other.entries_) add(e.value, -e.mult);
    return *this;
}

int RootMultiset::cardinality() const {
    return std::accumulate(entries_.begin(), entries_.end(), 0,
                           [](int acc, const Entry& e) { return acc + e.mult; });
}

std::vector<cplx> RootMultiset::expanded() const {
    std::vector<cplx> out;
    for (const auto& e : entries_)
        for (int k = 0; k < e.mult; ++k) out.push_back(e.value);
    return out;
}

cplx RootMultiset::sum(const std::function<cplx(cplx)>& f) const {
    cplx s = 0.0;
    for (const auto& e : entries_) s += static_cast<double>(e.mult) * f(e.value);
    return s;
}

cplx RootMultiset::prod(const std::function<cplx(cplx)>& f) const {
    cplx p = 1.0;
    for (const auto& e : entries_) {
        const cplx v = f(e.value);
        p *= e.mult >= 0 ? std::pow(v, e.mult) : 1.0 / std::pow(v, -e.mult);
    }
    return p;
}

namespace {

constexpr double kCutTol = 1e-12;

cplx theta_inner(cplx lam, double zeta) {
    return I * ln_p(std::sinh(I * zeta + lam) / std::sinh(I * zeta - lam));
}

cplx theta_outer(cplx lam, double zeta) {
    const double sg = pi - 2 * zeta > 0 ? 1.0 : (pi - 2 * zeta < 0 ? -1.0 : 0.0);
    return -pi * sg + I * ln_p(std::sinh(I * zeta + lam) / std::sinh(lam - I * zeta));
}

}  // namespace

cplx infinite_root(int side) {
    return {side > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity(), 0.0};
}

cplx sinh_ratio(cplx a, cplx b, cplx l) {
    if (is_infinite_root(l)) return l.real() > 0 ? std::exp(a - b) : std::exp(b - a);
    return std::sinh(a + l) / std::sinh(b + l);
}

cplx scattering_factor(cplx d, double zeta) {
    if (std::isnan(d.real())) return 1.0;
    const cplx iz = I * zeta;
    return -sinh_ratio(iz, -iz, d);
}

cplx theta(cplx lam, double zeta, CutPolicy policy, bool* on_cut) {
    if (is_infinite_root(lam)) {
        if (on_cut) *on_cut = false;
        return I * ln_p(scattering_factor(lam, zeta));
    }
    const double zm = zeta_m(zeta);
    const cplx l = reduce_strip(lam);
    const double y = l.imag();
    const bool cut = l.real() > 0 && std::abs(std::abs(y) - zm) < kCutTol;
    if (on_cut) *on_cut = cut;
    if (cut) {
        if (policy == CutPolicy::throw_on_cut)
            throw Error(Errc::cut_evaluation, "theta evaluated on a cut");
        // + boundary value: the side with larger imaginary part
        return y > 0 ? theta_outer(l, zeta) : theta_inner(l, zeta);
    }
    return std::abs(y) < zm ? theta_inner(l, zeta) : theta_outer(l, zeta);
}

cplx theta_plus(cplx lam, double zeta) { return theta(lam, zeta, CutPolicy::plus_boundary); }

cplx kernel_K(cplx xi, double zeta) {
    if (is_infinite_root(xi)) return 0.0;
    const double zm = zeta_m(zeta);
    const double sg = pi - 2 * zeta >= 0 ? 1.0 : -1.0;
    const cplx c1 = 1.0 / std::tanh(xi - I * zm);
    const cplx c2 = 1.0 / std::tanh(xi + I * zm);
    return sg / (2 * pi * I) * (c1 - c2);
}

cplx kernel_K_prime(cplx xi, double zeta) {
    if (is_infinite_root(xi)) return 0.0;
    const double zm = zeta_m(zeta);
    const double sg = pi - 2 * zeta >= 0 ? 1.0 : -1.0;
    const cplx s1 = std::sinh(xi - I * zm);
    const cplx s2 = std::sinh(xi + I * zm);
    return sg / (2 * pi * I) * (-1.0 / (s1 * s1) + 1.0 / (s2 * s2));
}

cplx e0(cplx xi, const ChainParams& p) {
    const double s = std::sin(p.zeta);
    return p.h - 2 * p.J * s * s / (std::sinh(xi) * std::sinh(xi - I * p.zeta));
}

cplx e0_prime(cplx xi, const ChainParams& p) {
    const double s = std::sin(p.zeta);
    const cplx a = std::sinh(xi), b = std::sinh(xi - I * p.zeta);
    const cplx coth_sum = std::cosh(xi) / a + std::cosh(xi - I * p.zeta) / b;
    return 2 * p.J * s * s * coth_sum / (a * b);
}

}  // namespace xxz
