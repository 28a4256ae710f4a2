#!/usr/bin/env python3
"""Brute-force reference values for the unit tests.

Builds the quantum monodromy matrix as an explicit product of embedded R-matrices
on h_0 (x) h_1 ... h_2N with numpy, traces out h_0, and compares against dense
exponentials of the periodic XXZ Hamiltonian. Nothing here shares code with the
C++ library. Run once; the printed numbers are frozen into tests/.
"""
import json
import sys

import numpy as np
from scipy.linalg import expm

SZ = np.diag([1.0, -1.0])
SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SY = np.array([[0.0, -1j], [1j, 0.0]])


def r_matrix(lam, eta):
    a, b, c = np.sinh(eta + lam), np.sinh(lam), np.sinh(eta)
    return np.array([[a, 0, 0, 0], [0, b, c, 0], [0, c, b, 0], [0, 0, 0, a]], dtype=complex) / np.sinh(eta)


def transpose_first(r):
    t = r.reshape(2, 2, 2, 2)  # i_a i_b j_a j_b
    return t.transpose(2, 1, 0, 3).reshape(4, 4)


def embed(r, a, b, n):
    """Operator on n qubits acting as r on (a, b), a being r's first factor."""
    t = r.reshape(2, 2, 2, 2)
    op = np.zeros((2,) * (2 * n), dtype=complex)
    eye = np.eye(2 ** (n - 2)).reshape((2,) * (2 * (n - 2)))
    rest = [k for k in range(n) if k not in (a, b)]
    # out indices 0..n-1, in indices n..2n-1
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    out = list(letters[:n])
    inn = list(letters[n:2 * n])
    spec_r = out[a] + out[b] + inn[a] + inn[b]
    spec_e = "".join(out[k] for k in rest) + "".join(inn[k] for k in rest)
    op = np.einsum(f"{spec_r},{spec_e}->{''.join(out)}{''.join(inn)}", t, eye)
    return op.reshape(2 ** n, 2 ** n)


def qtm(xi, N, J, zeta, T, h):
    eta = -1j * zeta
    aleph = J / T * np.sinh(eta)
    n = 2 * N + 1
    t = embed(np.diag([1.0, 1.0, 1.0, 1.0]).astype(complex), 0, 1, n)
    twist = np.kron(expm(h / (2 * T) * SZ), np.eye(2 ** (n - 1)))
    m = twist
    for k in range(1, N + 1):
        odd, even = 2 * k - 1, 2 * k
        m = embed(r_matrix(xi - aleph / N, eta), 0, odd, n) @ m
        m = embed(transpose_first(r_matrix(-aleph / N - xi, eta)), even, 0, n) @ m
    del t
    q = 2 ** (n - 1)
    return m[:q, :q] + m[q:, q:]


def hamiltonian(L, J, zeta, h):
    def site(op, i):
        mats = [np.eye(2)] * L
        mats[i] = op
        out = mats[0]
        for x in mats[1:]:
            out = np.kron(out, x)
        return out

    D = np.cos(zeta)
    H = np.zeros((2 ** L, 2 ** L), dtype=complex)
    for i in range(L):
        j = (i + 1) % L
        H += J * (site(SX, i) @ site(SX, j) + site(SY, i) @ site(SY, j)
                  + D * (site(SZ, i) @ site(SZ, j) + np.eye(2 ** L)))
        H -= h / 2 * site(SZ, i)
    return H


def spectrum(N, J, zeta, T, h):
    t = qtm(0.0, N, J, zeta, T, h)
    ev = np.linalg.eigvals(t)
    order = sorted(range(len(ev)), key=lambda k: (-round(abs(ev[k]), 12), np.angle(ev[k])))
    return t, ev[order]


def main():
    zeta = np.pi / 7
    out = {}
    for N in (2, 3):
        t, ev = spectrum(N, 1.0, zeta, 10.0, 0.5)
        out[f"N{N}_J1_T10_h05"] = {
            "max_imag_entry": float(np.abs(t.imag).max()),
            "Lambda": [[float(z.real), float(z.imag)] for z in ev[:4]],
            "trace_L4": float(np.trace(np.linalg.matrix_power(t, 4)).real),
        }
    _, ev = spectrum(3, 0.5, zeta, 100.0, 0.0)
    out["N3_J05_T100_h0"] = {"Lambda_max": float(ev[0].real)}
    H = hamiltonian(4, 1.0, zeta, 0.5)
    out["Z_L4_J1_T10_h05"] = float(np.trace(expm(-H / 10.0)).real)
    H2 = hamiltonian(2, 1.0, np.pi / 2, 0.0)
    out["H_L2_Delta0_eigs"] = sorted(float(x) for x in np.linalg.eigvalsh(H2))
    json.dump(out, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
