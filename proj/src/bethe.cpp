#include "xxz/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "xxz/parallel.hpp"

namespace xxz {

namespace {

inline cplx coth(cplx z) { return std::cosh(z) / std::sinh(z); }

double sgn_m(double zeta) { return pi - 2 * zeta >= 0 ? 1.0 : -1.0; }

cplx normalize_root(cplx lam) {
    cplx l = reduce_strip(lam);
    if (std::abs(l.imag() - pi / 2) < 1e-8 || std::abs(l.imag() + pi / 2) < 1e-8) l = {l.real(), pi / 2};
    return l;
}

// Raw product form of tau; no pole handling.
cplx tau_raw(cplx xi, const std::vector<cplx>& roots, const ChainParams& p) {
    const cplx iz = I * p.zeta;
    cplx p1 = 1.0, p2 = 1.0;
    for (cplx l : roots) {
        p1 *= sinh_ratio(xi + iz, xi, -l);
        p2 *= sinh_ratio(xi - iz, xi, -l);
    }
    return tq_coefficient_a(xi, p) * p1 + tq_coefficient_d(xi, p) * p2;
}

}  // namespace

cplx tq_coefficient_a(cplx xi, const ChainParams& p) {
    const cplx c = p.aleph() / double(p.N), iz = I * p.zeta;
    const cplx s2 = std::sinh(-iz) * std::sinh(-iz);
    const double sign = (p.N % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(p.h / (2 * p.T)) * std::pow(std::sinh(xi + c) * std::sinh(xi - c - iz) / s2, p.N);
}

cplx tq_coefficient_d(cplx xi, const ChainParams& p) {
    const cplx c = p.aleph() / double(p.N), iz = I * p.zeta;
    const cplx s2 = std::sinh(-iz) * std::sinh(-iz);
    const double sign = (p.N % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(-p.h / (2 * p.T)) * std::pow(std::sinh(xi + c + iz) * std::sinh(xi - c) / s2, p.N);
}

cplx tau(cplx xi, const std::vector<cplx>& roots, const ChainParams& p, bool* near_pole) {
    double dmin = 1e300;
    for (cplx l : roots)
        if (!is_infinite_root(l)) dmin = std::min(dmin, std::abs(reduce_strip(xi - l)));
    if (near_pole) *near_pole = dmin < 1e-9;
    if (dmin >= 1e-9) return tau_raw(xi, roots, p);
    // circle mean of an analytic tau; exact up to Taylor order 16
    constexpr int K = 16;
    constexpr double r = 1e-4;
    cplx acc = 0.0;
    for (int k = 0; k < K; ++k) acc += tau_raw(xi + r * std::exp(I * (2 * pi * k / K + 0.1)), roots, p);
    return acc / double(K);
}

cplx aux_function(cplx xi, const std::vector<cplx>& roots, const ChainParams& p) {
    const cplx c = p.aleph() / double(p.N), iz = I * p.zeta;
    const int M = static_cast<int>(roots.size());
    const int s = p.N - M;
    cplx prod = ((s % 2 + 2) % 2 == 0 ? 1.0 : -1.0) * std::exp(-p.h / p.T);
    for (cplx l : roots) prod *= -sinh_ratio(iz - xi, -iz - xi, l);
    const cplx f = std::sinh(xi - c) * std::sinh(iz + xi + c) / (std::sinh(xi + c) * std::sinh(iz - xi + c));
    return prod * std::pow(f, p.N);
}

cplx aux_log_derivative(cplx xi, const std::vector<cplx>& roots, const ChainParams& p) {
    const cplx c = p.aleph() / double(p.N), iz = I * p.zeta;
    cplx d = 0.0;
    for (cplx l : roots)
        if (!is_infinite_root(l)) d += -coth(iz - xi + l) - coth(iz + xi - l);
    d += double(p.N) * (coth(xi - c) + coth(iz + xi + c) - coth(xi + c) + coth(iz - xi + c));
    return d;
}

std::vector<cplx> bae_residuals(const std::vector<cplx>& roots, const ChainParams& p) {
    std::vector<cplx> r(roots.size());
    // roots at infinity have no equation of their own
    for (std::size_t a = 0; a < roots.size(); ++a)
        r[a] = is_infinite_root(roots[a]) ? 0.0 : 1.0 + aux_function(roots[a], roots, p);
    return r;
}

double bae_residual(const std::vector<cplx>& roots, const ChainParams& p) {
    double m = 0.0;
    for (cplx v : bae_residuals(roots, p)) m = std::max(m, std::abs(v));
    return m;
}

bool is_admissible(const std::vector<cplx>& roots, const ChainParams& p, double tol) {
    const cplx iz = I * p.zeta, c = p.aleph() / double(p.N);
    for (std::size_t a = 0; a < roots.size(); ++a) {
        for (std::size_t b = 0; b < roots.size(); ++b) {
            if (same_mod_ipi(roots[a], roots[b] + iz, tol) || same_mod_ipi(roots[a], roots[b] - iz, tol))
                return false;
        }
        for (cplx q : {c, -c, c + iz, c - iz, -c + iz, -c - iz})
            if (same_mod_ipi(roots[a], q, tol)) return false;
    }
    return true;
}

bool has_near_string(const std::vector<cplx>& roots, const ChainParams& p, double tol) {
    const cplx iz = I * p.zeta;
    for (std::size_t a = 0; a < roots.size(); ++a)
        for (std::size_t b = a + 1; b < roots.size(); ++b)
            if (same_mod_ipi(roots[a], roots[b] + iz, tol) || same_mod_ipi(roots[a], roots[b] - iz, tol))
                return true;
    return false;
}

bool has_singular_pair(const std::vector<cplx>& roots, const ChainParams& p, double tol) {
    const cplx iz = I * p.zeta;
    bool up = false, down = false;
    for (cplx l : roots) {
        up = up || same_mod_ipi(l, iz, tol);
        down = down || same_mod_ipi(l, -iz, tol);
    }
    return up && down;
}

PolishResult polish_roots(std::vector<cplx> roots, const ChainParams& p, double tol, int max_iter) {
    const cplx iz = I * p.zeta, c = p.aleph() / double(p.N);
    std::vector<int> var;  // finite roots; roots at infinity stay fixed
    for (int a = 0; a < static_cast<int>(roots.size()); ++a)
        if (!is_infinite_root(roots[a])) var.push_back(a);
    const int M = static_cast<int>(var.size());
    PolishResult out;
    auto resid = [&](const std::vector<cplx>& r) {
        Eigen::VectorXcd F(M);
        for (int a = 0; a < M; ++a) F(a) = 1.0 + aux_function(r[var[a]], r, p);
        return F;
    };
    Eigen::VectorXcd F = resid(roots);
    double fn = M > 0 ? F.cwiseAbs().maxCoeff() : 0.0;
    int it = 0;
    for (; it < max_iter && fn > tol; ++it) {
        Eigen::MatrixXcd Jm(M, M);
        for (int a = 0; a < M; ++a) {
            const cplx ra = roots[var[a]];
            const cplx av = aux_function(ra, roots, p);
            cplx diag = double(p.N) * (coth(ra - c) + coth(iz + ra + c) - coth(ra + c) + coth(iz - ra + c));
            for (int b = 0; b < M; ++b) {
                if (b == a) continue;
                const cplx t1 = coth(iz - ra + roots[var[b]]);
                const cplx t2 = coth(iz + ra - roots[var[b]]);
                diag += -t1 - t2;
                Jm(a, b) = av * (t1 + t2);
            }
            Jm(a, a) = av * diag;
        }
        const Eigen::VectorXcd step = Jm.fullPivLu().solve(-F);
        if (!step.allFinite()) break;
        double damp = 1.0;
        bool accepted = false;
        for (int k = 0; k < 8; ++k) {
            std::vector<cplx> trial(roots);
            for (int a = 0; a < M; ++a) trial[var[a]] += damp * step(a);
            const Eigen::VectorXcd Ft = resid(trial);
            const double ft = Ft.cwiseAbs().maxCoeff();
            if (std::isfinite(ft) && ft < fn) {
                roots = trial;
                F = Ft;
                fn = ft;
                accepted = true;
                break;
            }
            damp *= 0.5;
        }
        if (!accepted) break;
    }
    for (auto& r : roots) r = normalize_root(r);
    out.roots = roots;
    out.residual = bae_residual(roots, p);
    out.iterations = it;
    out.converged = out.residual <= tol;
    return out;
}

std::vector<cplx> dominant_seeds(const ChainParams& p) {
    const cplx c = p.aleph() / double(p.N);
    std::vector<cplx> seeds;
    const int N = p.N;
    const int lo = (N % 2 == 0) ? -N / 2 + 1 : -(N - 1) / 2;
    for (int k = lo; k < lo + N; ++k) {
        const cplx e = std::exp(I * ((2.0 * k - 1.0) * pi / N));
        seeds.push_back(-c * (1.0 + e) / (1.0 - e));
    }
    return seeds;
}

namespace {

struct TqFit {
    bool ok = false;
    double condition = 1e300;
    double null_ratio = 1.0;  // smallest singular value relative to the row scale
    std::vector<cplx> roots;  // finite roots only
};

// Fits P(z) = z^{k_minus} R(w), deg R = M - k_plus - k_minus, w = (z - 1) / sigma, to
// tau P(z) = a e^{-i M zeta} P(z e^{2 i zeta}) + d e^{i M zeta} P(z e^{-2 i zeta}).
// k_plus roots sit at +infinity (degree drop), k_minus at -infinity (z = 0).
TqFit fit_tq(const std::vector<cplx>& xi, const std::vector<cplx>& values, int M, int k_plus, int k_minus,
             const ChainParams& p, const ExtractOptions& opt) {
    TqFit out;
    const int n = static_cast<int>(xi.size());
    const int d = M - k_plus - k_minus;
    const cplx iz = I * p.zeta;
    const double sigma = std::max(2.0 * std::abs(p.aleph()), 1e-12);
    const cplx qp = std::exp(2.0 * iz), qm = std::exp(-2.0 * iz);
    const cplx shift_p = std::pow(qp, k_minus), shift_m = std::pow(qm, k_minus);
    Eigen::MatrixXcd A(n, d + 1);
    for (int j = 0; j < n; ++j) {
        const cplx z = std::exp(2.0 * xi[j]);
        const cplx a = tq_coefficient_a(xi[j], p) * std::exp(-double(M) * iz) * shift_p;
        const cplx dd = tq_coefficient_d(xi[j], p) * std::exp(double(M) * iz) * shift_m;
        const cplx w0 = (z - 1.0) / sigma, wp = (z * qp - 1.0) / sigma, wm = (z * qm - 1.0) / sigma;
        cplx p0 = 1.0, pp = 1.0, pm = 1.0;
        double sc = 0.0;
        for (int k = 0; k <= d; ++k) {
            A(j, k) = values[j] * p0 - a * pp - dd * pm;
            sc = std::max(sc, std::abs(values[j] * p0) + std::abs(a * pp) + std::abs(dd * pm));
            p0 *= w0;
            pp *= wp;
            pm *= wm;
        }
        if (sc > 0) A.row(j) /= sc;
    }
    if (d == 0) {
        out.null_ratio = A.col(0).cwiseAbs().maxCoeff();
        out.condition = 1.0;
        out.ok = true;
        return out;
    }
    Eigen::VectorXd colscale(d + 1);
    for (int k = 0; k <= d; ++k) {
        colscale(k) = std::max(A.col(k).cwiseAbs().maxCoeff(), 1e-300);
        A.col(k) /= colscale(k);
    }
    // P is the right singular vector of the smallest singular value; the ratio of the two
    // smallest ones measures how well the null space is isolated.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    out.condition = sv(d - 1) > 0 ? sv(0) / sv(d - 1) : 1e300;
    out.null_ratio = sv(d) / std::max(sv(0), 1e-300);
    if (out.condition > opt.max_condition || !(sv(d) < 1e-4 * sv(d - 1))) return out;
    Eigen::VectorXcd coef = svd.matrixV().col(d);
    for (int k = 0; k <= d; ++k) coef(k) /= colscale(k);
    if (!(std::abs(coef(d)) > 1e-300) || !std::isfinite(std::abs(coef(d)))) return out;
    coef /= coef(d);
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -coef(i);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (int i = 0; i < d; ++i) out.roots.push_back(normalize_root(0.5 * std::log(1.0 + sigma * es.eigenvalues()(i))));
    out.ok = true;
    return out;
}

}  // namespace

BetheState roots_from_samples(const std::vector<cplx>& xi, const std::vector<cplx>& values, int M,
                              const ChainParams& p, const ExtractOptions& opt) {
    BetheState st;
    st.M = M;
    st.s = p.N - M;
    if (M == 0) {
        st.polished = true;
        st.residual = 0.0;
        return st;
    }
    TqFit fit = fit_tq(xi, values, M, 0, 0, p, opt);
    st.tq_condition = fit.condition;
    if (!fit.ok) {
        st.flags.push_back("ill_conditioned_tq");
        return st;
    }
    // Far roots are candidates for roots at infinity: a root at -infinity shows up as a
    // multiple root at z = 0, one at +infinity as a drop of the degree. A candidate split
    // is kept when the reduced fit is exact.
    int far_plus = 0, far_minus = 0;
    for (cplx r : fit.roots) {
        if (r.real() > opt.far_root) ++far_plus;
        if (r.real() < -opt.far_root) ++far_minus;
    }
    int k_plus = 0, k_minus = 0;
    for (int tot = far_plus + far_minus; tot > 0 && k_plus + k_minus == 0; --tot) {
        for (int kp = std::min(tot, far_plus); kp >= 0 && tot - kp <= far_minus; --kp) {
            const TqFit f = fit_tq(xi, values, M, kp, tot - kp, p, opt);
            if (f.ok && f.null_ratio < opt.infinity_fit_tol) {
                fit = f;
                k_plus = kp;
                k_minus = tot - kp;
                break;
            }
        }
    }
    std::vector<cplx> roots = fit.roots;
    for (int k = 0; k < k_plus; ++k) roots.push_back(infinite_root(+1));
    for (int k = 0; k < k_minus; ++k) roots.push_back(infinite_root(-1));
    if (k_plus + k_minus > 0) st.flags.push_back("roots_at_infinity");
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    auto coalesced = [&](const std::vector<cplx>& r) {
        for (std::size_t a = 0; a < r.size(); ++a)
            for (std::size_t b = a + 1; b < r.size(); ++b)
                if (same_mod_ipi(r[a], r[b], opt.coalesce_tol)) return true;
        return false;
    };
    if (coalesced(roots)) {
        st.roots = roots;
        st.multiplicity = true;
        st.flags.push_back("multiplicity_detected");
        st.residual = bae_residual(roots, p);
        st.admissible = is_admissible(roots, p);
        return st;
    }
    PolishResult pr = polish_roots(roots, p, opt.polish_tol);
    // Newton is a refinement of an exact fit. Large moves happen on strings and singular
    // pairs, where the product form of the equations is 0/0 and the fit is the better answer.
    double shift = 0.0;
    for (std::size_t a = 0; a < roots.size(); ++a) {
        if (is_infinite_root(roots[a])) continue;
        const cplx d = reduce_strip(pr.roots[a] - roots[a]);
        shift = std::max(shift, std::min(std::abs(d), std::abs(d - I * pi)));
    }
    if (!(shift <= opt.polish_max_shift)) {
        st.roots = roots;
        st.residual = bae_residual(roots, p);
        st.flags.push_back("polish_rejected");
    } else if (coalesced(pr.roots)) {
        st.roots = roots;
        st.multiplicity = true;
        st.flags.push_back("multiplicity_detected");
        st.residual = bae_residual(roots, p);
    } else if (pr.residual <= bae_residual(roots, p) || !std::isfinite(bae_residual(roots, p))) {
        st.roots = pr.roots;
        st.residual = pr.residual;
        st.polished = pr.converged;
        if (!pr.converged) st.flags.push_back("polish_incomplete");
    } else {
        st.roots = roots;
        st.residual = bae_residual(roots, p);
        st.flags.push_back("polish_incomplete");
    }
    std::sort(st.roots.begin(), st.roots.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    st.admissible = is_admissible(st.roots, p);
    if (!st.admissible) st.flags.push_back("not_admissible");
    return st;
}

namespace {

// M + 2 points on the outer circle plus M + 2 on an inner circle at the hole
// scale 2|aleph|, so that clustered roots and far roots are both resolved.
// Without the inner ring all 2M + 4 points sit on the outer circle.
std::vector<cplx> collocation_points(int M, double radius, const ChainParams& p, bool inner_ring = true) {
    std::vector<cplx> xs;
    if (!inner_ring) {
        for (int j = 0; j < 2 * M + 4; ++j) xs.push_back(radius * std::exp(I * (0.37 + 2 * pi * j / (2 * M + 4))));
        return xs;
    }
    for (int j = 0; j < M + 2; ++j) xs.push_back(radius * std::exp(I * (0.37 + 2 * pi * j / (M + 2))));
    const double inner = std::min(2.0 * std::abs(p.aleph()), 0.25 * radius);
    for (int j = 0; j < M + 2; ++j) xs.push_back(inner * std::exp(I * (0.61 + 2 * pi * j / (M + 2))));
    return xs;
}

cplx rayleigh(const Mat& B, const Vec& v) { return v.dot(B * v) / v.squaredNorm(); }

void finish_state(BetheState& st, cplx eigenvalue, const ChainParams& p, const ExtractOptions& opt) {
    st.eigenvalue = eigenvalue;
    if (!st.flags.empty() && st.flags.front() == "ill_conditioned_tq") return;
    bool np = false;
    const cplx t0 = tau(0.0, st.roots, p, &np);
    st.tau_error = std::abs(t0 - eigenvalue) / std::max(std::abs(eigenvalue), opt.tau_floor);
    if (np) st.flags.push_back("near_pole");
    // strings are ill-conditioned for the product form of the Bethe equations
    if (has_near_string(st.roots, p, opt.string_tol)) st.flags.push_back("near_string");
    if (has_singular_pair(st.roots, p, opt.string_tol)) st.flags.push_back("singular_pair");
}

bool has_flag(const BetheState& st, const char* f) {
    return std::find(st.flags.begin(), st.flags.end(), f) != st.flags.end();
}

bool ill(const BetheState& st) { return !st.flags.empty() && st.flags.front() == "ill_conditioned_tq"; }

bool acceptable(const BetheState& st, const ExtractOptions& opt) {
    if (ill(st) || st.roots.size() != static_cast<std::size_t>(st.M)) return false;
    const bool tau_ok = st.tau_error <= opt.accept_tau || has_flag(st, "singular_pair");
    const bool res_ok = st.residual <= opt.accept_residual || has_flag(st, "near_string");
    return tau_ok && res_ok;
}

// Ordering of failed attempts: any fit beats an ill-conditioned one, then the larger of the
// two error measures decides.
bool better(const BetheState& a, const BetheState& b) {
    if (ill(a) != ill(b)) return !ill(a);
    const auto score = [](const BetheState& s) {
        return std::max(std::isfinite(s.residual) ? s.residual : 1e300,
                        std::isfinite(s.tau_error) ? s.tau_error : 1e300);
    };
    return score(a) < score(b);
}

}  // namespace

BetheState extract_roots(const Vec& psi, const SectorBasis& b, const ChainParams& p, const ExtractOptions& opt) {
    const int M = b.m;
    const cplx lam0 = rayleigh(qtm_block(0.0, p, b), psi);
    BetheState best;
    bool have = false;
    for (double rf : opt.radius_factors) {
        for (bool inner : {true, false}) {
            const double r = rf * p.zeta_m();
            const auto xs = collocation_points(M, r, p, inner);
            std::vector<cplx> vals;
            for (cplx x : xs) vals.push_back(rayleigh(qtm_block(x, p, b), psi));
            BetheState st = roots_from_samples(xs, vals, M, p, opt);
            st.tq_radius = r;
            finish_state(st, lam0, p, opt);
            if (acceptable(st, opt)) return st;
            if (!have || better(st, best)) best = std::move(st);
            have = true;
        }
    }
    return best;
}

std::vector<BetheState> extract_sector(const SpectrumRecord& rec, int m, const ChainParams& p,
                                       const ExtractOptions& opt, int jobs) {
    const SectorBasis& b = rec.bases.at(m);
    const Mat& V0 = rec.vectors.at(m);
    std::vector<int> idx;
    for (int a = 0; a < rec.size(); ++a)
        if (rec.sector[a] == m) idx.push_back(a);
    const int n = static_cast<int>(idx.size());

    // Joint eigenvectors from t_q at a generic point, where the spectrum is far
    // better separated than at xi = 0; matched back to the xi = 0 eigenvalues.
    Mat V(V0.rows(), n);
    {
        const cplx xs = 0.5 * p.zeta_m() * std::exp(I * 0.83);
        Eigen::ComplexEigenSolver<Mat> es(qtm_block(xs, p, b));
        Mat W = es.eigenvectors();
        W.colwise().normalize();
        const Mat B0W = qtm_block(0.0, p, b) * W;
        std::vector<cplx> lam0(n);
        for (int k = 0; k < n; ++k) lam0[k] = W.col(k).dot(B0W.col(k));
        std::vector<std::tuple<double, int, int>> pairs;
        pairs.reserve(std::size_t(n) * n);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) pairs.emplace_back(std::abs(rec.eigenvalues[idx[k]] - lam0[j]), k, j);
        std::sort(pairs.begin(), pairs.end());
        std::vector<bool> used_k(n, false), used_j(n, false);
        for (const auto& [d, k, j] : pairs) {
            if (used_k[k] || used_j[j]) continue;
            used_k[k] = used_j[j] = true;
            V.col(k) = W.col(j);
        }
    }

    std::vector<BetheState> out(n);
    std::vector<bool> pending(n, true), have(n, false);
    for (double rf : opt.radius_factors) {
        for (bool inner : {true, false}) {
            if (std::none_of(pending.begin(), pending.end(), [](bool v) { return v; })) break;
            const double r = rf * p.zeta_m();
            const auto xs = collocation_points(m, r, p, inner);
            std::vector<Mat> blocks(xs.size());
            parallel_for(static_cast<int>(xs.size()), jobs, [&](int j) { blocks[j] = qtm_block(xs[j], p, b); });
            // eigenvalue samples for every state at every point
            Eigen::MatrixXcd vals(n, xs.size());
            const Eigen::VectorXd nrm = V.colwise().squaredNorm().transpose();
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const Mat BV = blocks[j] * V;
                for (int k = 0; k < n; ++k) vals(k, j) = V.col(k).dot(BV.col(k)) / nrm(k);
            }
            parallel_for(n, jobs, [&](int k) {
                if (!pending[k]) return;
                std::vector<cplx> v(xs.size());
                for (std::size_t j = 0; j < xs.size(); ++j) v[j] = vals(k, j);
                BetheState st = roots_from_samples(xs, v, m, p, opt);
                st.tq_radius = r;
                st.eigen_index = idx[k];
                finish_state(st, rec.eigenvalues[idx[k]], p, opt);
                if (acceptable(st, opt)) pending[k] = false;
                if (!have[k] || !pending[k] || better(st, out[k])) out[k] = std::move(st);
                have[k] = true;
            });
        }
    }
    return out;
}

RootMultiset HoleParticleSets::y_hat_total() const { return Y_hat + Y_sg - X_hat; }

RootMultiset y_kappa(const RootMultiset& y_total, int s, cplx kappa) {
    RootMultiset out = y_total;
    out.add(kappa, -(s + y_total.cardinality()));
    return out;
}

HoleParticleSets detect_sets(const BetheState& st, const ContourGrid& grid, const ChainParams& p) {
    HoleParticleSets hs;
    const double eps = grid.eps;
    const cplx c = p.aleph() / double(p.N);
    const double shift = sgn_m(p.zeta) * p.zeta_m();
    const double tol = 1e-7;
    if (std::abs(c) >= eps) throw Error(Errc::config, "contour must enclose +-aleph/N");

    std::vector<cplx> inside;
    std::vector<cplx> poles;  // Y_sg locations (reduced)
    for (cplx l : st.roots) {
        const cplx r = reduce_strip(l);
        if (std::abs(r) < eps) {
            inside.push_back(r);
            hs.inside.add(r, 1);
        } else {
            hs.Y_hat.add(r, 1);
            const cplx q = reduce_strip(r - I * shift);
            if (std::abs(q) < eps) {
                hs.Y_sg.add(q, 1);
                poles.push_back(q);
            }
        }
    }
    (void)tol;

    // moments of a'/(1+a) in the scaled variable w = u / eps; the node count is doubled
    // until the winding integral is an integer (zeros of 1 + a close to the circle)
    const int kmax = 2 * p.N + static_cast<int>(st.roots.size()) + 2;
    std::vector<cplx> S(kmax + 1);
    for (int nq = grid.nq;; nq *= 2) {
        const ContourGrid gq = nq == grid.nq ? grid : ContourGrid::make(eps, nq, grid.kappa_angle);
        std::vector<cplx> g(nq);
        double minmod = 1e300;
        for (int j = 0; j < nq; ++j) {
            const cplx u = gq.nodes[j];
            const cplx a = aux_function(u, st.roots, p);
            const cplx one_a = 1.0 + a;
            minmod = std::min(minmod, std::abs(one_a));
            g[j] = aux_log_derivative(u, st.roots, p) * a / one_a;
        }
        hs.min_modulus = minmod;
        if (minmod < 1e-8) throw Error(Errc::contour_through_zero, "min |1+a| on the contour below 1e-8");
        for (int k = 0; k <= kmax; ++k) {
            std::vector<cplx> f(nq);
            for (int j = 0; j < nq; ++j) f[j] = std::pow(gq.nodes[j] / eps, k) * g[j];
            S[k] = gq.integrate(f) / (2 * pi * I);
        }
        hs.winding_defect = std::abs(S[0] - std::round(S[0].real()));
        if (hs.winding_defect <= 1e-9) break;
        if (nq >= 8192) {
            if (hs.winding_defect > 1e-6)
                throw Error(Errc::contour_through_zero, "winding integral is not an integer");
            break;
        }
    }
    hs.monodromy = static_cast<int>(std::lround(S[0].real()));

    // power sums of the zeros of 1 + a in D, minus the Bethe roots inside
    for (int k = 0; k <= kmax; ++k) {
        S[k] += double(p.N) * std::pow(-c / eps, k);
        for (cplx q : poles) S[k] += std::pow(q / eps, k);
        for (cplx l : inside) S[k] -= std::pow(l / eps, k);
    }
    const int nx = static_cast<int>(std::lround(S[0].real()));
    hs.zero_count = nx + static_cast<int>(inside.size());
    if (nx < 0 || std::abs(S[0] - double(nx)) > 1e-6)
        throw Error(Errc::monodromy_mismatch, "hole count is not a nonnegative integer");
    if (nx > kmax) throw Error(Errc::convergence_failure, "too many holes for the moment order");

    std::vector<cplx> holes;
    if (nx > 0) {
        // Newton identities -> elementary symmetric polynomials
        std::vector<cplx> e(nx + 1, 0.0);
        e[0] = 1.0;
        for (int k = 1; k <= nx; ++k) {
            cplx acc = 0.0;
            for (int i = 1; i <= k; ++i) acc += ((i % 2 == 1) ? 1.0 : -1.0) * e[k - i] * S[i];
            e[k] = acc / double(k);
        }
        // w^n - e1 w^{n-1} + e2 w^{n-2} - ...
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(nx, nx);
        for (int i = 1; i < nx; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < nx; ++i) {
            const int k = nx - i;  // coefficient of w^i is (-1)^k e_k
            comp(i, nx - 1) = -(((k % 2 == 0) ? 1.0 : -1.0) * e[k]);
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        double worst = 0.0;
        for (int i = 0; i < nx; ++i) {
            cplx x = es.eigenvalues()(i) * eps;
            for (int it = 0; it < 40; ++it) {
                const cplx a = aux_function(x, st.roots, p);
                const cplx da = a * aux_log_derivative(x, st.roots, p);
                const cplx dx = (1.0 + a) / da;
                if (!std::isfinite(std::abs(dx))) break;
                x -= dx;
                if (std::abs(dx) < 1e-15 * std::max(std::abs(x), 1e-3)) break;
            }
            worst = std::max(worst, std::abs(1.0 + aux_function(x, st.roots, p)));
            holes.push_back(x);
            hs.X_hat.add(x, 1);
        }
        hs.hole_residual = worst;
    }
    const int expect = -st.s - hs.Y_hat.cardinality() - hs.Y_sg.cardinality() + hs.X_hat.cardinality();
    if (expect != hs.monodromy) throw Error(Errc::monodromy_mismatch, "winding does not match the root bookkeeping");
    return hs;
}

}  // namespace xxz
