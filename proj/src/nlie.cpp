#include "xxz/nlie.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "json.hpp"

namespace xxz {

namespace {

constexpr int kGaussNodes = 16;

// Gauss-Legendre rule on [0, 1] (Golub-Welsch).
struct GaussRule {
    std::vector<double> t, w;
};

const GaussRule& gauss_rule() {
    static const GaussRule rule = [] {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(kGaussNodes, kGaussNodes);
        for (int k = 1; k < kGaussNodes; ++k) {
            const double b = k / std::sqrt(4.0 * k * k - 1.0);
            J(k, k - 1) = J(k - 1, k) = b;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
        GaussRule r;
        for (int k = 0; k < kGaussNodes; ++k) {
            const double v0 = es.eigenvectors()(0, k);
            r.t.push_back(0.5 * (es.eigenvalues()(k) + 1.0));
            r.w.push_back(v0 * v0);  // 2 v0^2 on [-1, 1], halved on [0, 1]
        }
        return r;
    }();
    return rule;
}

cplx y_kappa_sum(const RootMultiset& yk, const std::function<cplx(cplx)>& f) { return yk.sum(f); }

// \oint f(u) t(u) du with f = sin(zeta) / (sinh(u - i zeta) sinh u) and t = arg(u / kappa) in [0, 2 pi).
cplx eigen_kernel_ramp(cplx kappa, double zeta) {
    const cplx iz = I * zeta;
    const cplx analytic = 2 * pi * std::log(std::sinh(kappa - iz) / std::sinh(-iz));
    const cplx regular = 2 * pi * std::log(std::sinh(kappa) / kappa);
    return -I * analytic + I * (regular + 2 * pi * pi * I);
}

cplx eigen_kernel(cplx u, double zeta) { return std::sin(zeta) / (std::sinh(u - I * zeta) * std::sinh(u)); }

// \oint sin(zeta) Ln(u) / (sinh(u - i zeta) sinh u) du, Ln = periodic + ramp * t
cplx eigen_integral(const ContourGrid& grid, const std::vector<cplx>& Ln, cplx ramp, double zeta) {
    cplx acc = 0.0;
    for (int j = 0; j < grid.nq; ++j)
        acc += eigen_kernel(grid.nodes[j], zeta) * (Ln[j] - ramp * grid.angle(j)) * grid.weight(j);
    return acc + ramp * eigen_kernel_ramp(grid.kappa(), zeta);
}

cplx kernel_integral_ramp(const ContourGrid& grid, const std::vector<cplx>& F, cplx ramp, cplx lam, double zeta) {
    cplx acc = 0.0;
    for (int j = 0; j < grid.nq; ++j)
        acc += kernel_K(lam - grid.nodes[j], zeta) * (F[j] - ramp * grid.angle(j)) * grid.weight(j);
    return acc + ramp * (theta(lam, zeta) - theta(lam - grid.kappa(), zeta));
}

// K(u_j - u_k) w_k
Mat kernel_matrix(const ContourGrid& grid, double zeta) {
    Mat Km(grid.nq, grid.nq);
    for (int j = 0; j < grid.nq; ++j)
        for (int k = 0; k < grid.nq; ++k) Km(j, k) = kernel_K(grid.nodes[j] - grid.nodes[k], zeta) * grid.weight(k);
    return Km;
}

// ramp correction theta(u_j) - theta(u_j - kappa)
std::vector<cplx> ramp_nodes(const ContourGrid& grid, double zeta) {
    std::vector<cplx> r(grid.nq);
    for (int j = 0; j < grid.nq; ++j)
        r[j] = theta(grid.nodes[j], zeta) - theta(grid.nodes[j] - grid.kappa(), zeta);
    return r;
}

// \oint K(u_j - u) F(u) du at every node
std::vector<cplx> apply_kernel(const Mat& Km, const std::vector<cplx>& rn, const ContourGrid& grid,
                               const std::vector<cplx>& F, cplx ramp) {
    Vec v(grid.nq);
    for (int k = 0; k < grid.nq; ++k) v(k) = F[k] - ramp * grid.angle(k);
    const Vec r = Km * v;
    std::vector<cplx> out(grid.nq);
    for (int j = 0; j < grid.nq; ++j) out[j] = r(j) + ramp * rn[j];
    return out;
}

void check_setup(const ChainParams& p, const ContourGrid& grid, bool trotter_limit, double T_min) {
    p.validate();
    if (p.T < T_min) throw Error(Errc::config, "temperature below the configured T_min");
    if (grid.eps >= 0.5 * p.zeta_m()) throw Error(Errc::config, "contour radius must be below zeta_m / 2");
    if (!trotter_limit && !(std::abs(p.aleph()) / p.N < grid.eps / 2))
        throw Error(Errc::config, "finite N requires |aleph| / N < eps / 2");
}

}  // namespace

cplx a_infinity(cplx xi, const RootMultiset& yk, int s, double zeta) {
    return -I * pi * double(s) + I * y_kappa_sum(yk, [&](cplx y) { return theta_plus(xi - y, zeta); });
}

cplx a_infinity_prime(cplx xi, const RootMultiset& yk, double zeta) {
    return I * 2.0 * pi * y_kappa_sum(yk, [&](cplx y) { return kernel_K(xi - y, zeta); });
}

double check_lower_bound(const ContourGrid& grid, const RootMultiset& yk, int s, double zeta, double rho) {
    double m = 1e300;
    for (cplx u : grid.nodes) m = std::min(m, std::abs(1.0 + std::exp(a_infinity(u, yk, s, zeta))));
    if (m < rho / 2) {
        std::ostringstream os;
        os << "|1 + exp(A_inf)| reaches " << m << " < rho / 2 = " << rho / 2;
        throw Error(Errc::lower_bound_violated, os.str());
    }
    return m;
}

cplx driving_wN(cplx xi, const ChainParams& p) {
    const cplx c = p.aleph() / double(p.N), iz = I * p.zeta;
    const cplx r = std::sinh(xi - c) * std::sinh(xi + c - iz) / (std::sinh(xi + c) * std::sinh(xi - c - iz));
    return double(p.N) * std::log(r);
}

cplx varpi(cplx xi, const ChainParams& p, bool trotter_limit) {
    return trotter_limit ? e0(xi, p) : p.h - p.T * driving_wN(xi, p);
}

RootMultiset NlieConfig::y_total() const { return Y + Y_sg - X; }

int NlieConfig::expected_monodromy() const {
    return X.cardinality() - Y.cardinality() - Y_sg.cardinality() - s;
}

double sup_norm(const std::vector<cplx>& v) {
    double m = 0.0;
    for (cplx z : v) m = std::max(m, std::abs(z));
    return m;
}

std::vector<cplx> derivative_mod_2pii(const ContourGrid& grid, const std::vector<cplx>& A) {
    // theta(xi - y) may have its cut crossing the disc, so A can jump by 2 pi i between nodes
    const int nq = grid.nq;
    auto lift = [](cplx prev, cplx z) { return z + 2 * pi * I * std::round((prev.imag() - z.imag()) / (2 * pi)); };
    std::vector<cplx> P(nq);
    P[0] = A[0];
    for (int j = 1; j < nq; ++j) P[j] = lift(P[j - 1], A[j]);
    const double w = std::round((lift(P[nq - 1], A[0]) - A[0]).imag() / (2 * pi));
    for (int j = 0; j < nq; ++j) P[j] -= I * w * grid.angle(j);
    std::vector<cplx> d = grid.derivative(P);
    for (int j = 0; j < nq; ++j) d[j] += w / grid.nodes[j];
    return d;
}

std::vector<cplx> continued_log(const ContourGrid& grid, const std::vector<cplx>& A, int* monodromy) {
    const std::vector<cplx> dA = derivative_mod_2pii(grid, A);
    std::vector<cplx> f(grid.nq);
    for (int j = 0; j < grid.nq; ++j) f[j] = dA[j] / (1.0 + std::exp(-A[j]));
    const cplx total = grid.integrate(f) / (2 * pi * I);
    const int m = static_cast<int>(std::lround(total.real()));
    if (monodromy) *monodromy = m;
    const std::vector<cplx> F = grid.primitive(f);
    std::vector<cplx> Ln(grid.nq);
    const cplx base = ln_p(1.0 + std::exp(A[0]));
    for (int j = 0; j < grid.nq; ++j) {
        // snap to the exact branch of log(1 + e^A) nearest to the integrated value
        const cplx raw = base + F[j];
        const cplx pr = ln_p(1.0 + std::exp(A[j]));
        Ln[j] = pr + 2 * pi * I * std::round((raw - pr).imag() / (2 * pi));
    }
    return Ln;
}

cplx kernel_integral(const ContourGrid& grid, const std::vector<cplx>& F, int m, cplx lam, double zeta) {
    return kernel_integral_ramp(grid, F, I * double(m), lam, zeta);
}

std::vector<cplx> chi_nodes(const ContourGrid& grid, const RootMultiset& yk, int s, const ChainParams& p,
                            bool trotter_limit) {
    std::vector<cplx> g(grid.nq);
    for (int k = 0; k < grid.nq; ++k) {
        const cplx u = grid.nodes[k];
        g[k] = varpi(u, p, trotter_limit) / (1.0 + std::exp(-a_infinity(u, yk, s, p.zeta)));
    }
    std::vector<cplx> out(grid.nq);
    for (int j = 0; j < grid.nq; ++j) out[j] = -kernel_integral_ramp(grid, g, 0.0, grid.nodes[j], p.zeta);
    return out;
}

NlieSolution solve_nlie(const NlieConfig& cfg, const ChainParams& p, const ContourGrid& grid,
                        const std::vector<cplx>* xi_start) {
    check_setup(p, grid, cfg.trotter_limit, cfg.T_min);
    NlieSolution sol;
    sol.grid = grid;
    sol.trotter_limit = cfg.trotter_limit;
    sol.N = p.N;
    sol.T = p.T;
    sol.s = cfg.s;
    sol.X = cfg.X;
    sol.Y = cfg.Y;
    sol.Y_sg = cfg.Y_sg;
    sol.y_kappa = y_kappa(cfg.y_total(), cfg.s, grid.kappa());

    const int nq = grid.nq;
    std::vector<cplx> ainf(nq), vp(nq);
    for (int j = 0; j < nq; ++j) {
        ainf[j] = a_infinity(grid.nodes[j], sol.y_kappa, cfg.s, p.zeta);
        vp[j] = varpi(grid.nodes[j], p, cfg.trotter_limit);
    }
    int m_inf = 0;
    const std::vector<cplx> ln_inf = continued_log(grid, ainf, &m_inf);
    sol.ball_radius = 2 * sup_norm(chi_nodes(grid, sol.y_kappa, cfg.s, p, true));

    const Mat Km = kernel_matrix(grid, p.zeta);
    const std::vector<cplx> rn = ramp_nodes(grid, p.zeta);
    const double damp = cfg.damping > 0 ? cfg.damping : (p.T >= 100 ? 1.0 : 0.5);

    std::vector<cplx> xi = xi_start ? *xi_start : std::vector<cplx>(nq, 0.0);
    if (static_cast<int>(xi.size()) != nq) throw Error(Errc::config, "initial fixed-point data has wrong size");
    std::vector<cplx> A(nq), Ln;
    int m = 0;
    auto build = [&] {
        for (int j = 0; j < nq; ++j) A[j] = ainf[j] + (xi[j] - vp[j]) / p.T;
        Ln = continued_log(grid, A, &m);
    };
    for (int it = 1; it <= cfg.max_iter; ++it) {
        build();
        std::vector<cplx> diff(nq);
        for (int j = 0; j < nq; ++j) diff[j] = Ln[j] - ln_inf[j];
        const std::vector<cplx> K = apply_kernel(Km, rn, grid, diff, I * double(m - m_inf));
        double delta = 0.0;
        for (int j = 0; j < nq; ++j) {
            const cplx nx = p.T * K[j];
            delta = std::max(delta, std::abs(nx - xi[j]) / p.T);
            xi[j] = (1 - damp) * xi[j] + damp * nx;
        }
        sol.iterations = it;
        sol.final_delta = delta;
        sol.xi_norm = sup_norm(xi);
        if (cfg.check_ball && sol.xi_norm > sol.ball_radius) {
            std::ostringstream os;
            os << "fixed-point iterate left the ball: " << sol.xi_norm << " > " << sol.ball_radius;
            throw Error(Errc::ball_escape, os.str());
        }
        if (delta < cfg.tol) break;
    }
    if (!(sol.final_delta < cfg.tol)) {
        std::ostringstream os;
        os << "no convergence after " << cfg.max_iter << " sweeps, last change " << sol.final_delta;
        throw Error(Errc::no_convergence, os.str());
    }
    build();
    sol.xi = xi;
    sol.A = A;
    sol.Ln = Ln;
    sol.monodromy = m;
    if (m != cfg.expected_monodromy()) {
        std::ostringstream os;
        os << "monodromy " << m << " differs from |X|-|Y|-|Y_sg|-s = " << cfg.expected_monodromy();
        throw Error(Errc::monodromy_mismatch, os.str());
    }
    return sol;
}

cplx nlie_evaluate(const NlieSolution& sol, cplx lam, const ChainParams& p) {
    const cplx drive = -varpi(lam, p, sol.trotter_limit) / p.T;
    return drive + a_infinity(lam, sol.y_kappa, sol.s, p.zeta) +
           kernel_integral(sol.grid, sol.Ln, sol.monodromy, lam, p.zeta);
}

FixedPointOperator FixedPointOperator::make(const NlieConfig& cfg, const ChainParams& p, const ContourGrid& grid) {
    check_setup(p, grid, cfg.trotter_limit, cfg.T_min);
    FixedPointOperator op;
    op.grid = grid;
    op.p = p;
    op.trotter_limit = cfg.trotter_limit;
    op.s = cfg.s;
    op.y_kappa = xxz::y_kappa(cfg.y_total(), cfg.s, grid.kappa());
    op.chi = chi_nodes(grid, op.y_kappa, cfg.s, p, cfg.trotter_limit);
    op.ball_radius = 2 * sup_norm(chi_nodes(grid, op.y_kappa, cfg.s, p, true));
    for (cplx u : grid.nodes) {
        op.a_inf.push_back(a_infinity(u, op.y_kappa, cfg.s, p.zeta));
        op.a_inf_prime.push_back(a_infinity_prime(u, op.y_kappa, p.zeta));
        op.varpi.push_back(xxz::varpi(u, p, cfg.trotter_limit));
    }
    return op;
}

std::vector<cplx> FixedPointOperator::apply(const std::vector<cplx>& xi) const {
    const int nq = grid.nq;
    if (static_cast<int>(xi.size()) != nq) throw Error(Errc::config, "fixed-point data has wrong size");
    std::vector<cplx> g(nq), gp;
    for (int j = 0; j < nq; ++j) g[j] = xi[j] - varpi[j];
    gp = grid.derivative(g);
    const GaussRule& gr = gauss_rule();
    std::vector<cplx> G(nq, 0.0);
    for (int j = 0; j < nq; ++j) {
        for (int k = 0; k < kGaussNodes; ++k) {
            const double t = gr.t[k];
            const cplx L = 1.0 / (1.0 + std::exp(-a_inf[j] - t * g[j] / p.T));
            const cplx L1 = L * (1.0 - L);
            const cplx L2 = L1 * (1.0 - 2.0 * L);
            G[j] += gr.w[k] * (g[j] * gp[j] * L1 + (1 - t) * g[j] * g[j] * a_inf_prime[j] * L2);
        }
    }
    const std::vector<cplx> P = grid.primitive(G);
    const cplx ramp = grid.integrate(G) / (2 * pi);
    std::vector<cplx> out(nq);
    for (int j = 0; j < nq; ++j)
        out[j] = chi[j] + kernel_integral_ramp(grid, P, ramp, grid.nodes[j], p.zeta) / p.T;
    return out;
}

double free_energy_over_T(const NlieSolution& sol, const ChainParams& p, double* imag_part) {
    if (!sol.trotter_limit) throw Error(Errc::config, "free energy needs the Trotter-limit solution");
    if (sol.s != 0 || !sol.X.empty() || !sol.Y.empty() || !sol.Y_sg.empty())
        throw Error(Errc::config, "free energy needs the dominant state (empty sets, s = 0)");
    const cplx I0 = eigen_integral(sol.grid, sol.Ln, I * double(sol.monodromy), p.zeta);
    const cplx v = p.h / (2 * p.T) - 2 * p.J * std::cos(p.zeta) / p.T - I0 / (2 * pi);
    if (imag_part) *imag_part = v.imag();
    return v.real();
}

double free_energy(const NlieSolution& sol, const ChainParams& p) { return -p.T * free_energy_over_T(sol, p); }

cplx eigenvalue_from_nlie(const NlieSolution& sol, const ChainParams& p) {
    const cplx iz = I * p.zeta;
    const cplx pref = sol.y_kappa.prod([&](cplx y) { return sinh_ratio(-iz, 0.0, y); });
    cplx expo = p.h / (2 * p.T) - eigen_integral(sol.grid, sol.Ln, I * double(sol.monodromy), p.zeta) / (2 * pi);
    cplx out = pref;
    if (sol.trotter_limit) {
        expo -= 2 * p.J * std::cos(p.zeta) / p.T;
    } else {
        const cplx c = p.aleph() / double(p.N);
        out *= std::pow(std::sinh(c + iz) / std::sinh(iz), 2 * p.N);
    }
    return out * std::exp(expo);
}

std::string nlie_to_json(const NlieSolution& sol, const ChainParams& p) {
    using nlohmann::json;
    auto arr = [](const std::vector<cplx>& v) {
        json a = json::array();
        for (cplx z : v) a.push_back({z.real(), z.imag()});
        return a;
    };
    json j;
    j["trotter"] = sol.trotter_limit ? json("inf") : json(sol.N);
    j["T"] = sol.T;
    j["s"] = sol.s;
    j["epsilon"] = sol.grid.eps;
    j["nq"] = sol.grid.nq;
    j["kappa_angle"] = sol.grid.kappa_angle;
    j["nodes"] = arr(sol.grid.nodes);
    j["A"] = arr(sol.A);
    j["Ln"] = arr(sol.Ln);
    j["monodromy"] = sol.monodromy;
    j["iterations"] = sol.iterations;
    j["final_delta"] = sol.final_delta;
    const cplx lam = eigenvalue_from_nlie(sol, p);
    j["Lambda"] = {lam.real(), lam.imag()};
    if (sol.trotter_limit && sol.s == 0 && sol.X.empty() && sol.Y.empty() && sol.Y_sg.empty())
        j["f"] = free_energy(sol, p);
    return j.dump(2);
}

}  // namespace xxz
