"""Independent reference values for the unit tests.

Re-implements the discretisation with scipy sparse matrices and a direct
solver (no shared code with the C++ library) and prints a C++ header with the
frozen values. Run: python3 oracles.py > ../unit/oracle_values.hpp
"""
import math

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla


def half_cell(s):
    return math.floor(2.0 * s)


def coeff(alpha, beta, delta, x, y, tau=(0.0, 0.0)):
    p = half_cell(x / delta + tau[0])
    q = half_cell(y / delta + tau[1])
    return alpha if (p + q) % 2 == 0 else beta


def edges(n, h, x0, a):
    """(i, j, weight) for every lattice edge, half weight along the boundary."""
    out = []
    for j in range(n):
        for i in range(n):
            x, y = x0 + i * h, x0 + j * h
            if i < n - 1:
                g = 0.5 if j in (0, n - 1) else 1.0
                out.append((j * n + i, j * n + i + 1, g * a(x + 0.5 * h, y)))
            if j < n - 1:
                g = 0.5 if i in (0, n - 1) else 1.0
                out.append((j * n + i, (j + 1) * n + i, g * a(x, y + 0.5 * h)))
    return out


def laplacian(N, es):
    rows, cols, vals = [], [], []
    for p, q, w in es:
        rows += [p, q, p, q]
        cols += [p, q, q, p]
        vals += [w, w, -w, -w]
    return sp.csr_matrix((vals, (rows, cols)), shape=(N, N))


def constrained_min(L, fixed, values):
    free = ~fixed
    A = L[free][:, free]
    b = -L[free][:, fixed] @ values[fixed]
    u = values.copy()
    u[free] = spla.spsolve(A.tocsc(), b)
    return u, float(u @ (L @ u))


def capacity(n, h, eps, z, a):
    x0 = -(n - 1) // 2 * h
    N = n * n
    L = laplacian(N, edges(n, h, x0, a))
    fixed = np.zeros(N, bool)
    vals = np.zeros(N)
    for j in range(n):
        for i in range(n):
            p = j * n + i
            x, y = x0 + i * h, x0 + j * h
            if i in (0, n - 1) or j in (0, n - 1):
                fixed[p] = True
            elif (x - z[0]) ** 2 + (y - z[1]) ** 2 <= eps * eps * (1 + 1e-12):
                fixed[p], vals[p] = True, 1.0
    return constrained_min(L, fixed, vals)[1]


def annulus(n, h, r, R, a):
    x0 = -(n - 1) // 2 * h
    N = n * n
    L = laplacian(N, edges(n, h, x0, a))
    fixed = np.zeros(N, bool)
    vals = np.zeros(N)
    for j in range(n):
        for i in range(n):
            p = j * n + i
            d2 = (x0 + i * h) ** 2 + (x0 + j * h) ** 2
            if d2 <= r * r * (1 + 1e-12):
                fixed[p], vals[p] = True, 1.0
            elif d2 >= R * R * (1 - 1e-12) or i in (0, n - 1) or j in (0, n - 1):
                fixed[p] = True
    return constrained_min(L, fixed, vals)[1]


def cell(alpha, beta, n):
    """Periodic correctors on the unit cell; dense least-squares with gauge."""
    h = 1.0 / n
    N = n * n
    idx = lambda i, j: (j % n) * n + (i % n)
    wx = np.array([[coeff(alpha, beta, 1.0, (i + 0.5) * h, j * h) for i in range(n)] for j in range(n)])
    wy = np.array([[coeff(alpha, beta, 1.0, i * h, (j + 0.5) * h) for i in range(n)] for j in range(n)])
    es = []
    for j in range(n):
        for i in range(n):
            es.append((idx(i, j), idx(i + 1, j), wx[j, i], 0))
            es.append((idx(i, j), idx(i, j + 1), wy[j, i], 1))
    L = laplacian(N, [(p, q, w) for p, q, w, _ in es]).toarray()
    L += np.ones((N, N)) / N  # gauge: fixes the mean
    A = np.zeros((2, 2))
    ws = []
    for d in range(2):
        b = np.zeros(N)
        for p, q, w, k in es:
            if k == d:  # energy term w (u_q - u_p + h)^2
                b[p] += w * h
                b[q] -= w * h
        ws.append(np.linalg.solve(L, b))
    for d in range(2):
        for e in range(2):
            s = 0.0
            for p, q, w, k in es:
                gd = ws[d][q] - ws[d][p] + (h if k == d else 0.0)
                ge = ws[e][q] - ws[e][p] + (h if k == e else 0.0)
                s += w * gd * ge
            A[d, e] = s
    return A


def main():
    cb = lambda x, y: coeff(1.0, 4.0, 0.5, x, y)
    one = lambda x, y: 1.0
    vals = {
        "kCheckerboardCapacity33": capacity(33, 1 / 16, 3 / 16, (1 / 8, 1 / 8), cb),
        "kUniformCapacity33": capacity(33, 1 / 16, 3 / 16, (0.0, 0.0), one),
        "kUniformAnnulus65": annulus(65, 1 / 32, 1 / 4, 1.0, one),
        "kCheckerboardAnnulus65": annulus(65, 1 / 32, 1 / 4, 1.0, lambda x, y: coeff(1.0, 4.0, 0.25, x, y)),
    }
    A = cell(1.0, 4.0, 16)
    vals["kCell16A11"] = A[0, 0]
    vals["kCell16A22"] = A[1, 1]
    vals["kCell16A12"] = 0.5 * (A[0, 1] + A[1, 0])
    vals["kCell16SqrtDet"] = math.sqrt(A[0, 0] * A[1, 1] - (0.5 * (A[0, 1] + A[1, 0])) ** 2)
    vals["kTwoPiOverLog2"] = 2 * math.pi / math.log(2)
    vals["kTwoPiOverLog8"] = 2 * math.pi / math.log(8)
    vals["kEightPiOverThree"] = 8 * math.pi / 3
    vals["kCheckerboardAnnulusLimit"] = 2 * math.pi * 2 / math.log(2)

    print("#pragma once")
    print()
    print("// Generated by tests/oracles/oracles.py (scipy direct solves); do not edit.")
    print()
    print("namespace oracle {")
    print()
    for k, v in vals.items():
        print(f"inline constexpr double {k} = {float(v)!r};")
    print()
    print("}  // namespace oracle")


if __name__ == "__main__":
    main()
