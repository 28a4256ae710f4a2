#include "xxz/contour.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

namespace xxz {

namespace {

// Fourier coefficients in angle, c[k] for k = 0..n-1 (negative k wrapped).
std::vector<cplx> forward(const std::vector<cplx>& f) {
    Eigen::FFT<double> fft;
    std::vector<cplx> c;
    fft.fwd(c, f);
    for (auto& v : c) v /= static_cast<double>(f.size());
    return c;
}

std::vector<cplx> inverse(const std::vector<cplx>& c) {
    Eigen::FFT<double> fft;
    std::vector<cplx> f;
    fft.inv(f, c);
    for (auto& v : f) v *= static_cast<double>(c.size());
    return f;
}

int wavenumber(int k, int n) { return k <= n / 2 ? k : k - n; }

}  // namespace

ContourGrid ContourGrid::make(double eps, int nq, double kappa_angle) {
    if (!(eps > 0.0)) throw Error(Errc::config, "contour radius must be positive");
    if (nq < 8 || nq % 2 != 0) throw Error(Errc::config, "node count must be even and >= 8");
    ContourGrid g;
    g.eps = eps;
    g.nq = nq;
    g.kappa_angle = kappa_angle;
    g.nodes.resize(nq);
    for (int j = 0; j < nq; ++j) g.nodes[j] = eps * std::exp(I * (kappa_angle + 2 * pi * j / nq));
    return g;
}

cplx ContourGrid::weight(int j) const { return I * nodes[j] * (2 * pi / nq); }

cplx ContourGrid::integrate(const std::vector<cplx>& f) const {
    cplx s = 0.0;
    for (int j = 0; j < nq; ++j) s += f[j] * weight(j);
    return s;
}

std::vector<cplx> ContourGrid::derivative(const std::vector<cplx>& f) const {
    std::vector<cplx> c = forward(f);
    for (int k = 0; k < nq; ++k) {
        const int m = wavenumber(k, nq);
        c[k] *= (m == nq / 2) ? 0.0 : I * static_cast<double>(m);
    }
    std::vector<cplx> d = inverse(c);
    for (int j = 0; j < nq; ++j) d[j] /= I * nodes[j];
    return d;
}

std::vector<cplx> ContourGrid::primitive(const std::vector<cplx>& f) const {
    // q(t) = f(u(t)) du/dt, t measured from kappa
    std::vector<cplx> q(nq);
    for (int j = 0; j < nq; ++j) q[j] = f[j] * I * nodes[j];
    std::vector<cplx> c = forward(q);
    const cplx c0 = c[0];
    std::vector<cplx> p(nq, 0.0);
    p[0] = 0.0;
    for (int k = 1; k < nq; ++k) {
        const int m = wavenumber(k, nq);
        p[k] = (m == nq / 2) ? 0.0 : c[k] / (I * static_cast<double>(m));
    }
    std::vector<cplx> F = inverse(p);
    const cplx F0 = F[0];
    for (int j = 0; j < nq; ++j) F[j] = F[j] - F0 + c0 * angle(j);
    return F;
}

double default_epsilon(double zeta, double T) {
    return std::min(0.25 * zeta_m(zeta), 0.6 / std::sqrt(T));
}

}  // namespace xxz
