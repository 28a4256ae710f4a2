#include "xxz/hlbae.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "xxz/parallel.hpp"

namespace xxz {

namespace {

inline cplx coth(cplx z) { return std::cosh(z) / std::sinh(z); }

cplx snap(cplx y) {
    cplx r = reduce_strip(y);
    if (std::abs(std::abs(r.imag()) - pi / 2) < 1e-12) r = {r.real(), pi / 2};
    return r;
}

// Shared Newton driver. hole_term(y) returns the log of the hole factor and its derivative.
template <class HoleFn>
HlbaeSolution newton(std::vector<cplx> y, int n_x, int s, const ChainParams& p, const HlbaeOptions& opt,
                     HoleFn hole_term, const std::function<std::vector<cplx>(const std::vector<cplx>&)>& delta) {
    const int n = static_cast<int>(y.size());
    if (n < 1) throw Error(Errc::config, "hlBAE needs n_y >= 1");
    const cplx iz = I * p.zeta;
    auto logres = [&](const std::vector<cplx>& v) {
        Eigen::VectorXcd F(n);
        const auto d = delta(v);
        for (int a = 0; a < n; ++a) F(a) = std::log(1.0 + d[a]);
        return F;
    };
    HlbaeSolution out;
    out.n_x = n_x;
    out.n_y = n;
    out.s = s;
    Eigen::VectorXcd F = logres(y);
    double fn = F.cwiseAbs().maxCoeff();
    int it = 0;
    for (; it < opt.max_iter && fn > opt.tol; ++it) {
        Eigen::MatrixXcd Jm = Eigen::MatrixXcd::Zero(n, n);
        for (int a = 0; a < n; ++a) {
            cplx diag = hole_term(y[a]);
            for (int b = 0; b < n; ++b) {
                if (b == a) continue;
                const cplx t = coth(iz + y[b] - y[a]) + coth(iz + y[a] - y[b]);
                diag -= t;
                Jm(a, b) = t;
            }
            Jm(a, a) = diag;
        }
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(Jm);
        if (lu.rank() < n || !std::isfinite(std::abs(lu.determinant()))) {
            std::ostringstream os;
            os << "singular hlBAE Jacobian at iteration " << it << ", residual " << fn;
            throw Error(Errc::jacobian_singular, os.str());
        }
        const Eigen::VectorXcd step = lu.solve(-F);
        double damp = 1.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k) {
            std::vector<cplx> trial(y);
            for (int a = 0; a < n; ++a) trial[a] += damp * step(a);
            const Eigen::VectorXcd Ft = logres(trial);
            const double ft = Ft.allFinite() ? Ft.cwiseAbs().maxCoeff() : std::numeric_limits<double>::infinity();
            if (ft < fn) {
                y = trial;
                F = Ft;
                fn = ft;
                accepted = true;
                break;
            }
            damp *= 0.5;
        }
        if (!accepted) break;
    }
    for (auto& v : y) v = snap(v);
    out.y = y;
    out.iterations = it;
    out.residual = max_abs(delta(y));
    out.converged = out.residual <= std::max(opt.tol, 1e-10);
    if (!out.converged) {
        std::ostringstream os;
        os << "hlBAE Newton stopped after " << it << " steps, residual " << out.residual;
        throw Error(Errc::newton_divergence, os.str());
    }
    return out;
}

std::string describe(const std::vector<cplx>& seeds) {
    std::ostringstream os;
    os << "seeds:";
    for (cplx v : seeds) os << " (" << v.real() << "," << v.imag() << ")";
    return os.str();
}

}  // namespace

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (cplx z : v) m = std::max(m, std::abs(z));
    return m;
}

std::vector<cplx> hlbae1_delta(const std::vector<cplx>& y, int n_x, double zeta) {
    const int n = static_cast<int>(y.size());
    const double sign = ((n_x - n + 1) % 2 == 0) ? 1.0 : -1.0;
    std::vector<cplx> d(n);
    for (int a = 0; a < n; ++a) {
        cplx prod = sign;
        for (int b = 0; b < n; ++b)
            if (b != a) prod *= scattering_factor(y[b] - y[a], zeta);
        prod *= std::pow(scattering_factor(y[a], zeta), n_x);
        d[a] = prod - 1.0;
    }
    return d;
}

std::vector<cplx> hlbae2_delta(const std::vector<cplx>& y, const std::vector<cplx>& x, double zeta) {
    const int n = static_cast<int>(y.size());
    const int n_x = static_cast<int>(x.size());
    const double sign = ((n_x - n + 1) % 2 == 0) ? 1.0 : -1.0;
    std::vector<cplx> d(n);
    for (int a = 0; a < n; ++a) {
        cplx prod = sign;
        for (int b = 0; b < n; ++b)
            if (b != a) prod *= scattering_factor(y[b] - y[a], zeta);
        for (cplx xl : x) prod *= scattering_factor(y[a] - xl, zeta);
        d[a] = prod - 1.0;
    }
    return d;
}

HlbaeSolution solve_hlbae1(int n_x, int s, const std::vector<cplx>& seeds, const ChainParams& p,
                           const HlbaeOptions& opt) {
    const cplx iz = I * p.zeta;
    auto hole = [&](cplx ya) { return double(n_x) * (coth(iz + ya) + coth(iz - ya)); };
    auto delta = [&](const std::vector<cplx>& v) { return hlbae1_delta(v, n_x, p.zeta); };
    HlbaeSolution sol = newton(seeds, n_x, s, p, opt, hole, delta);
    sol.seeds = describe(seeds);
    return sol;
}

HlbaeSolution solve_hlbae2(const std::vector<cplx>& x_holes, int s, const std::vector<cplx>& seeds,
                           const ChainParams& p, const HlbaeOptions& opt) {
    const cplx iz = I * p.zeta;
    const int n_x = static_cast<int>(x_holes.size());
    auto hole = [&](cplx ya) {
        cplx t = 0.0;
        for (cplx xl : x_holes) t += coth(iz + ya - xl) + coth(iz - ya + xl);
        return t;
    };
    auto delta = [&](const std::vector<cplx>& v) { return hlbae2_delta(v, x_holes, p.zeta); };
    HlbaeSolution sol = newton(seeds, n_x, s, p, opt, hole, delta);
    sol.seeds = describe(seeds);
    return sol;
}

std::vector<cplx> hole_asymptotics(const std::vector<int>& k, const std::vector<cplx>& Y, int s,
                                   const ChainParams& p) {
    cplx th = 0.0;
    for (cplx y : Y) th += theta(-y, p.zeta);
    std::vector<cplx> x;
    for (int ka : k) {
        const cplx den = (2.0 * ka + 1.0 + s) * pi - th;
        if (std::abs(den) < 1e-8) throw Error(Errc::resonant_denominator, "hole asymptotics denominator vanishes");
        x.push_back(-2.0 * p.J * std::sin(p.zeta) / (p.T * den));
    }
    return x;
}

double hole_mode(cplx x, const std::vector<cplx>& Y, const ChainParams& p) {
    cplx th = 0.0;
    for (cplx y : Y) th += theta(-y, p.zeta);
    const cplx den = -2.0 * p.J * std::sin(p.zeta) / (p.T * x);
    return ((den + th) / pi).real();
}

cplx theorem2_ratio(const std::vector<int>& h, const std::vector<cplx>& y, int n_x, const ChainParams& p,
                    double rho) {
    const cplx iz = I * p.zeta;
    const int n_y = static_cast<int>(y.size());
    const double zm = p.zeta_m();
    for (int a = 0; a < n_y; ++a)
        for (int b = 0; b < n_y; ++b) {
            if (a == b) continue;
            if (same_mod_ipi(y[a], y[b], 1e-10) || same_mod_ipi(y[a], y[b] + iz, 1e-10) ||
                same_mod_ipi(y[a], y[b] - iz, 1e-10))
                throw Error(Errc::constraint_violated, "clause 1: coinciding or string-related particle roots");
        }
    cplx prod = ((n_x - n_y) % 2 == 0) ? 1.0 : -1.0;
    for (cplx yb : y) prod *= scattering_factor(yb, p.zeta);
    if (!(std::abs(prod + 1.0) > rho)) throw Error(Errc::constraint_violated, "clause 2: rho lower bound");
    for (cplx ya : y) {
        const cplx r = reduce_strip(ya);
        if (std::abs(r) < 1e-12 || std::abs(r - I * zm) < rho || std::abs(r + I * zm) < rho ||
            std::abs(r - I * (pi - zm)) < rho)
            throw Error(Errc::constraint_violated, "clause 3: particle root in an excluded disc");
    }
    for (std::size_t a = 0; a < h.size(); ++a)
        for (std::size_t b = a + 1; b < h.size(); ++b)
            if (h[a] == h[b]) throw Error(Errc::constraint_violated, "clause 4: hole integers not distinct");
    if (static_cast<int>(h.size()) != n_x) throw Error(Errc::constraint_violated, "clause 4: need n_x hole integers");
    cplx th = 0.0;
    for (cplx ya : y) th += theta_plus(-ya, p.zeta);
    cplx v = std::pow(p.T, -double(n_x));
    for (int ha : h) v *= -2.0 * I * p.J / ((2.0 * ha + 1.0 + n_x - n_y) * pi - th);
    for (cplx ya : y) v *= sinh_ratio(-iz, 0.0, ya);
    return v;
}

cplx correlation_length_largeT(const std::vector<int>& h, const std::vector<cplx>& y, int n_x,
                               const ChainParams& p, double f, double rho) {
    return theorem2_ratio(h, y, n_x, p, rho) * std::exp(f / p.T);
}

namespace {

// Hungarian-free minimum over permutations; n_y is small in practice.
double perm_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    const int n = static_cast<int>(a.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += std::abs(reduce_strip(a[i] - b[idx[i]]));
        best = std::min(best, d);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
}

}  // namespace

SigmaInfinity build_sigma_infinity(int n_x, int n_y, int s, const ChainParams& p, const CatalogOptions& opt) {
    SigmaInfinity cat;
    cat.n_x = n_x;
    cat.n_y = n_y;
    cat.s = s;
    if (n_y == 0) {
        cat.members.push_back({});
        return cat;
    }
    const cplx iz = I * p.zeta;
    // configurations with n_plus roots at +inf and n_minus at -inf: their own equations reduce
    // to a constant phase that must equal 1
    for (int n_plus = 0; n_plus <= n_y; ++n_plus)
        for (int n_minus = 0; n_plus + n_minus <= n_y; ++n_minus) {
            const int nf = n_y - n_plus - n_minus;
            const cplx sgn = ((s + 1) % 2 == 0) ? 1.0 : -1.0;
            const cplx far = -std::exp(-2.0 * iz);  // one finite (or opposite-side) root seen from +inf
            if (n_plus > 0) {
                const cplx c = sgn * std::pow(far, nf + n_minus) * std::pow(-std::exp(2.0 * iz), n_x);
                if (std::abs(c - 1.0) > 1e-10) continue;
            }
            if (n_minus > 0) {
                const cplx c = sgn * std::pow(std::conj(far), nf + n_plus) * std::pow(-std::exp(-2.0 * iz), n_x);
                if (std::abs(c - 1.0) > 1e-10) continue;
            }
            std::vector<std::vector<CatalogRoot>> found;
            if (nf == 0) {
                std::vector<CatalogRoot> m;
                for (int k = 0; k < n_plus; ++k) m.push_back({0.0, +1});
                for (int k = 0; k < n_minus; ++k) m.push_back({0.0, -1});
                cat.members.push_back(m);
                continue;
            }
            // finite roots feel each infinite root as a constant phase
            const cplx phase = std::pow(std::conj(far), n_plus) * std::pow(far, n_minus);
            std::vector<std::vector<cplx>> sols(opt.starts);
            std::vector<bool> ok(opt.starts, false);
            parallel_for(opt.starts, opt.jobs, [&](int k) {
                std::mt19937 rng(opt.seed + 7919u * static_cast<unsigned>(k));
                std::uniform_real_distribution<double> re(-opt.re_range, opt.re_range), im(-pi / 2, pi / 2);
                std::vector<cplx> y(nf);
                for (auto& v : y) v = {re(rng), im(rng)};
                if (k % 2 == 1) {
                    // conjugation-closed start: pairs y, conj(y), the odd one on Im = 0 or pi/2
                    std::uniform_real_distribution<double> up(0.0, pi / 2);
                    for (int a = 0; a + 1 < nf; a += 2) {
                        y[a] = {re(rng), up(rng)};
                        y[a + 1] = std::conj(y[a]);
                    }
                    if (nf % 2 == 1) y[nf - 1] = {re(rng), (rng() % 2) ? pi / 2 : 0.0};
                }
                auto delta = [&](const std::vector<cplx>& v) {
                    auto d = hlbae1_delta(v, n_x, p.zeta);
                    // hlbae1_delta uses the sign for n_y = |v|; restore the full-set sign and phase
                    const double fix = ((n_plus + n_minus) % 2 == 0) ? 1.0 : -1.0;
                    for (auto& di : d) di = (di + 1.0) * fix * phase - 1.0;
                    return d;
                };
                auto hole = [&](cplx ya) { return double(n_x) * (coth(iz + ya) + coth(iz - ya)); };
                try {
                    HlbaeSolution sol = newton(y, n_x, s, p, HlbaeOptions{1e-12, 100}, hole, delta);
                    const double tol = 1e-6;
                    bool adm = true;
                    for (int a = 0; a < nf && adm; ++a)
                        for (int b = a + 1; b < nf && adm; ++b)
                            if (same_mod_ipi(sol.y[a], sol.y[b], tol) || same_mod_ipi(sol.y[a], sol.y[b] + iz, tol) ||
                                same_mod_ipi(sol.y[a], sol.y[b] - iz, tol))
                                adm = false;
                    if (adm) {
                        sols[k] = sol.y;
                        ok[k] = true;
                    }
                } catch (const Error&) {
                }
            });
            for (int k = 0; k < opt.starts; ++k) {
                if (!ok[k]) continue;
                bool dup = false;
                for (const auto& f : found) {
                    std::vector<cplx> fv;
                    for (const auto& r : f)
                        if (r.infinity == 0) fv.push_back(r.y);
                    if (perm_distance(fv, sols[k]) < opt.dedupe_tol) {
                        dup = true;
                        break;
                    }
                }
                if (dup) continue;
                std::vector<CatalogRoot> m;
                for (cplx v : sols[k]) m.push_back({v, 0});
                for (int q = 0; q < n_plus; ++q) m.push_back({0.0, +1});
                for (int q = 0; q < n_minus; ++q) m.push_back({0.0, -1});
                found.push_back(m);
            }
            for (auto& m : found) cat.members.push_back(std::move(m));
        }
    return cat;
}

double sigma_infinity_distance(const std::vector<cplx>& Y, const SigmaInfinity& catalog) {
    if (catalog.members.empty()) throw Error(Errc::empty_catalog, "sigma_infinity catalog is empty");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : catalog.members) {
        if (m.size() != Y.size()) continue;
        std::vector<cplx> fv;
        bool finite = true;
        for (const auto& r : m) {
            if (r.infinity != 0) finite = false;
            fv.push_back(r.y);
        }
        if (!finite) continue;
        best = std::min(best, perm_distance(Y, fv));
    }
    return best;
}

}  // namespace xxz
