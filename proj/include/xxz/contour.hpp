#pragma once

#include <vector>

#include "xxz/model.hpp"

namespace xxz {

// Circle of radius eps around 0, nodes starting at the base point kappa.
struct ContourGrid {
    double eps = 0.0;
    int nq = 0;
    double kappa_angle = 0.0;
    std::vector<cplx> nodes;  // u_j = eps exp(i (kappa_angle + 2 pi j / nq))

    static ContourGrid make(double eps, int nq = 256, double kappa_angle = 0.0);

    cplx kappa() const { return nodes.front(); }
    // du at node j for the periodic trapezoidal rule
    cplx weight(int j) const;
    // \oint f(u) du from nodal samples
    cplx integrate(const std::vector<cplx>& f) const;
    // d f / du from nodal samples of a function analytic near the circle
    std::vector<cplx> derivative(const std::vector<cplx>& f) const;
    // F(u_j) = \int_kappa^{u_j} f(u) du along the positively oriented circle.
    // The mean part of f du / d(angle) is integrated exactly, so F need not be periodic.
    std::vector<cplx> primitive(const std::vector<cplx>& f) const;
    // Evaluates g at every node.
    template <class Fn>
    std::vector<cplx> sample(Fn g) const {
        std::vector<cplx> out(nodes.size());
        for (std::size_t j = 0; j < nodes.size(); ++j) out[j] = g(nodes[j]);
        return out;
    }
    // angle of node j measured from kappa, in [0, 2 pi)
    double angle(int j) const { return 2 * pi * j / nq; }
};

// Default radius min(0.25 zeta_m, 0.6 / sqrt(T)).
double default_epsilon(double zeta, double T);

}  // namespace xxz
