"""Connection and curvature machinery on a declared frame.

Conventions (fixed, and pinned by golden tests):

* Koszul:  ``2 g(nabla_X Y, Z) = X g(Y,Z) + Y g(Z,X) - Z g(X,Y)
  - g(X,[Y,Z]) - g(Y,[X,Z]) + g(Z,[X,Y])``
* Curvature: ``R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z
  - nabla_[X,Y] Z``
* Ricci: ``S(X,Y) = sum g^{ij} g(R(e_i, X) Y, e_j)``; scalar curvature
  ``r = sum g^{ij} S_ij``.
* Star-Ricci: ``S*(X,Y) = (1/2) sum g^{ij} g(phi(R(X, phi Y) e_i), e_j)``
  with ``r* = sum g^{ij} S*_ij``.
* Exterior derivative (1-form): ``dw(X,Y) = X(w(Y)) - Y(w(X)) - w([X,Y])``;
  (2-form): ``dW(X,Y,Z) = X(W(Y,Z)) - Y(W(X,Z)) + Z(W(X,Y))
  - W([X,Y],Z) + W([X,Z],Y) - W([Y,Z],X)``;
  wedge: ``(eta ^ Phi)(X,Y,Z) = eta(X)Phi(Y,Z) + eta(Y)Phi(Z,X)
  + eta(Z)Phi(X,Y)``.

All tensors produced here are frame-indexed arrays of scalar fields.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import scalar
from .errors import DegeneratePlane
from .geometry import VectorField, lie_bracket
from .scalar import Rat, ZERO, ONE, evaluate, simplify

HALF = Rat(Fraction(1, 2))


def _is0(e):
    return isinstance(e, Rat) and e.value == 0


class ConnectionTable:
    """Levi-Civita Christoffel data on the frame.

    ``gamma[i][j][k]`` is the ``e_k`` component of ``nabla_{e_i} e_j``.
    """

    def __init__(self, M, gamma, brackets):
        self.M = M
        self.gamma = gamma
        self.brackets = brackets  # frame components of [e_i, e_j]

    def nabla_frame(self, i, j):
        """Frame components of ``nabla_{e_i} e_j``."""
        return list(self.gamma[i][j])

    def nabla_comps(self, x_frame, c_frame):
        """Frame components of ``nabla_X Y`` from frame components.

        ``nabla_X (c^k e_k) = X(c^k) e_k + c^k x^i nabla_{e_i} e_k``;
        the X-derivation of a component is taken through the frame:
        ``X(f) = sum_i x^i e_i(f)``.
        """
        M = self.M
        n = M.dim
        out = [ZERO] * n
        for k in range(n):
            ck = c_frame[k]
            # derivative part
            if not _is0(ck):
                for i in range(n):
                    if _is0(x_frame[i]):
                        continue
                    out[k] = out[k] + x_frame[i] * M.frame[i].apply(ck)
            else:
                for i in range(n):
                    if _is0(x_frame[i]):
                        continue
                    d = M.frame[i].apply(ck)
                    if not _is0(d):
                        out[k] = out[k] + x_frame[i] * d
        for i in range(n):
            xi_c = x_frame[i]
            if _is0(xi_c):
                continue
            for l in range(n):
                cl = c_frame[l]
                if _is0(cl):
                    continue
                row = self.gamma[i][l]
                for k in range(n):
                    if not _is0(row[k]):
                        out[k] = out[k] + xi_c * cl * row[k]
        return [simplify(e) for e in out]

    def nabla(self, X, Y):
        """``nabla_X Y`` for coordinate vector fields (frame components)."""
        return self.nabla_comps(self.M.to_frame(X), self.M.to_frame(Y))

    def nabla_operator(self, A, x_frame):
        """Covariant derivative of a (1,1) tensor given as a frame matrix.

        ``(nabla_X A)(e_j) = nabla_X (A e_j) - A (nabla_X e_j)``; rows of
        the result are images of the frame vectors.
        """
        M = self.M
        n = M.dim
        out = []
        for j in range(n):
            first = self.nabla_comps(x_frame, A[j])
            nx_ej = self.nabla_comps(x_frame, [ONE if k == j else ZERO for k in range(n)])
            second = [ZERO] * n
            for m in range(n):
                if _is0(nx_ej[m]):
                    continue
                for k in range(n):
                    if not _is0(A[m][k]):
                        second[k] = second[k] + nx_ej[m] * A[m][k]
            out.append([simplify(a - b) for a, b in zip(first, second)])
        return out


def koszul(M):
    """Levi-Civita connection of the declared frame metric."""
    n = M.dim
    brackets = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if j < i:
                brackets[i][j] = [simplify(-c) for c in brackets[j][i]]
            elif i == j:
                brackets[i][j] = [ZERO] * n
            else:
                brackets[i][j] = M.to_frame(lie_bracket(M.frame[i], M.frame[j]))

    def g_frame(c, d):
        out = ZERO
        for a in range(n):
            if _is0(c[a]):
                continue
            for b in range(n):
                if not _is0(d[b]) and not _is0(M.metric[a][b]):
                    out = out + c[a] * d[b] * M.metric[a][b]
        return out

    basis = [[ONE if k == m else ZERO for m in range(n)] for k in range(n)]
    gamma = []
    for i in range(n):
        row_i = []
        for j in range(n):
            rhs = []
            for k in range(n):
                term = M.frame[i].apply(M.metric[j][k])
                term = term + M.frame[j].apply(M.metric[k][i])
                term = term - M.frame[k].apply(M.metric[i][j])
                term = term - g_frame(basis[i], brackets[j][k])
                term = term - g_frame(basis[j], brackets[i][k])
                term = term + g_frame(basis[k], brackets[i][j])
                rhs.append(HALF * term)
            # solve sum_m gamma^m G_mk = rhs_k  =>  gamma = Ginv . rhs
            entry = [
                simplify(sum((M.metric_inverse[m][k] * rhs[k] for k in range(n)), ZERO))
                for m in range(n)
            ]
            row_i.append(entry)
        gamma.append(row_i)
    return ConnectionTable(M, gamma, brackets)


class CurvatureTable:
    """Riemann, Ricci, and star-Ricci data on the frame."""

    def __init__(self, M, conn):
        self.M = M
        self.conn = conn
        n = M.dim
        basis = [[ONE if k == m else ZERO for m in range(n)] for k in range(n)]
        # R[i][j][k]: frame components of R(e_i, e_j) e_k, for i < j
        R = [[[None] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i == j:
                    for k in range(n):
                        R[i][j][k] = [ZERO] * n
                    continue
                if j < i:
                    for k in range(n):
                        R[i][j][k] = [simplify(-c) for c in R[j][i][k]]
                    continue
                for k in range(n):
                    a = conn.nabla_comps(basis[i], conn.gamma[j][k])
                    b = conn.nabla_comps(basis[j], conn.gamma[i][k])
                    c = conn.nabla_comps(conn.brackets[i][j], basis[k])
                    R[i][j][k] = [simplify(p - q - s) for p, q, s in zip(a, b, c)]
        self.R = R

        G = M.metric
        Ginv = M.metric_inverse
        # lowered curvature g(R(e_a, e_i) e_j, e_b)
        low = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
        for a in range(n):
            for i in range(n):
                for j in range(n):
                    comps = R[a][i][j]
                    for b in range(n):
                        low[a][i][j][b] = simplify(
                            sum((comps[m] * G[m][b] for m in range(n) if not _is0(comps[m])), ZERO)
                        )
        self.lowered = low

        # Ricci S_ij = sum g^{ab} g(R(e_a, e_i) e_j, e_b)
        S = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                out = ZERO
                for a in range(n):
                    for b in range(n):
                        if not _is0(Ginv[a][b]):
                            out = out + Ginv[a][b] * low[a][i][j][b]
                S[i][j] = simplify(out)
        self.ricci = S

        # Ricci operator rows: Q e_i = sum_k Q[i][k] e_k with g(Q e_i, .) = S(e_i, .)
        self.ricci_operator = [
            [simplify(sum((Ginv[k][j] * S[j][i] for j in range(n)), ZERO)) for k in range(n)]
            for i in range(n)
        ]

        self.scalar_curvature = simplify(
            sum((Ginv[i][j] * S[i][j] for i in range(n) for j in range(n)
                 if not _is0(Ginv[i][j])), ZERO)
        )

        # star-Ricci S*_ij = 1/2 sum g^{ab} g(phi(R(e_i, phi e_j) e_a), e_b)
        P = M.phi
        Sstar = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                phj = P[j]  # phi(e_j) frame components
                out = ZERO
                for a in range(n):
                    # R(e_i, phi e_j) e_a, by linearity in the middle slot
                    comps = [ZERO] * n
                    for m in range(n):
                        if _is0(phj[m]):
                            continue
                        rm = R[i][m][a]
                        for k in range(n):
                            if not _is0(rm[k]):
                                comps[k] = comps[k] + phj[m] * rm[k]
                    # apply phi
                    phi_comps = [ZERO] * n
                    for m in range(n):
                        if _is0(comps[m]):
                            continue
                        for k in range(n):
                            if not _is0(P[m][k]):
                                phi_comps[k] = phi_comps[k] + comps[m] * P[m][k]
                    # contract with sum_b g^{ab} g(., e_b)
                    for b in range(n):
                        if _is0(Ginv[a][b]):
                            continue
                        inner = sum((phi_comps[m] * G[m][b] for m in range(n)
                                     if not _is0(phi_comps[m])), ZERO)
                        out = out + Ginv[a][b] * inner
                Sstar[i][j] = simplify(HALF * out)
        self.star_ricci = Sstar
        self.star_scalar = simplify(
            sum((Ginv[i][j] * Sstar[i][j] for i in range(n) for j in range(n)
                 if not _is0(Ginv[i][j])), ZERO)
        )

    def riemann_frame(self, i, j, k):
        """Frame components of ``R(e_i, e_j) e_k``."""
        return list(self.R[i][j][k])

    def riemann_apply(self, x_frame, y_frame, z_frame):
        """``R(X, Y) Z`` by multilinearity over frame components."""
        n = self.M.dim
        out = [ZERO] * n
        for i in range(n):
            if _is0(x_frame[i]):
                continue
            for j in range(n):
                if _is0(y_frame[j]):
                    continue
                coeff = x_frame[i] * y_frame[j]
                for k in range(n):
                    if _is0(z_frame[k]):
                        continue
                    rm = self.R[i][j][k]
                    c = coeff * z_frame[k]
                    for m in range(n):
                        if not _is0(rm[m]):
                            out[m] = out[m] + c * rm[m]
        return [simplify(e) for e in out]


def sectional_curvature(M, table, X, Y):
    """``k(X,Y) = g(R(X,Y)Y, X) / (g(X,X) g(Y,Y) - g(X,Y)^2)``.

    Raises DegeneratePlane when the denominator vanishes on the domain.
    """
    x = M._frame_comps(X)
    y = M._frame_comps(Y)
    num = M.metric_apply(table.riemann_apply(x, y, y), x)
    den = simplify(M.metric_apply(x, x) * M.metric_apply(y, y) - pow2(M.metric_apply(x, y)))
    verdict = M.is_zero_field(den)
    if verdict.is_zero:
        raise DegeneratePlane("the declared 2-plane is degenerate for this metric")
    return simplify(num / den)


def pow2(e):
    return e * e


def lie_derivative_metric(M, V):
    """``(L_V g)(e_i, e_j) = V(g_ij) - g([V,e_i], e_j) - g(e_i, [V,e_j])``."""
    n = M.dim
    br = [M.to_frame(lie_bracket(V, M.frame[i])) for i in range(n)]
    basis = [[ONE if k == m else ZERO for m in range(n)] for k in range(n)]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            val = V.apply(M.metric[i][j])
            val = val - M.metric_apply(br[i], basis[j])
            val = val - M.metric_apply(basis[i], br[j])
            out[i][j] = out[j][i] = simplify(val)
    return out


def hessian(M, conn, f):
    """``Hess f(e_i, e_j) = e_i(e_j(f)) - (nabla_{e_i} e_j)(f)``."""
    n = M.dim
    ef = [M.frame[j].apply(f) for j in range(n)]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            val = M.frame[i].apply(ef[j])
            for k in range(n):
                gk = conn.gamma[i][j][k]
                if not _is0(gk):
                    val = val - gk * ef[k]
            out[i][j] = simplify(val)
    return out


class StructureTensors:
    """The tensors ``h = (1/2) L_xi phi``, ``h' = h o phi``, ``l = R(., xi) xi``.

    Rows are frame images, like the phi convention.
    """

    def __init__(self, M, table=None):
        self.M = M
        n = M.dim
        xi = M.xi
        phi_fields = [M.from_frame(M.phi[j]) for j in range(n)]

        def half_lie_phi(Y, phiY):
            # (L_xi phi)(Y) = [xi, phi Y] - phi([xi, Y])
            a = M.to_frame(lie_bracket(xi, phiY))
            b = M.phi_frame_apply(M.to_frame(lie_bracket(xi, Y)))
            return [simplify(HALF * (p - q)) for p, q in zip(a, b)]

        self.h = [half_lie_phi(M.frame[j], phi_fields[j]) for j in range(n)]
        # h'(e_j) = h(phi e_j), computed directly from the bracket definition
        phi2 = [M.from_frame(M.phi_frame_apply(M.phi[j])) for j in range(n)]
        self.h_prime = [half_lie_phi(phi_fields[j], phi2[j]) for j in range(n)]
        if table is not None:
            xi_f = M.xi_frame
            basis = [[ONE if k == m else ZERO for m in range(n)] for k in range(n)]
            self.ell = [table.riemann_apply(basis[j], xi_f, xi_f) for j in range(n)]
        else:
            self.ell = None

    def h_prime_squared(self):
        n = self.M.dim
        hp = self.h_prime
        out = [[ZERO] * n for _ in range(n)]
        for j in range(n):
            for m in range(n):
                if _is0(hp[j][m]):
                    continue
                for k in range(n):
                    if not _is0(hp[m][k]):
                        out[j][k] = out[j][k] + hp[j][m] * hp[m][k]
        return [[simplify(e) for e in row] for row in out]

    def spectrum(self, snap_tol=1e-9):
        """Eigenvalues of h' sampled over the domain.

        Returns ``(values, max_spread)``: values from the first sample
        point (snapped to integers when that close), spread the largest
        eigenvalue movement across sample points.
        """
        M = self.M
        n = M.dim
        pts = M.sampler.points()
        all_eigs = []
        for env in pts[: min(len(pts), 10)]:
            mat = np.empty((n, n))
            for j in range(n):
                for k in range(n):
                    # operator matrix: column j holds the image of e_j
                    mat[k, j] = float(evaluate(self.h_prime[j][k], env))
            eigs = np.sort(np.linalg.eigvals(mat).real)
            all_eigs.append(eigs)
        first = all_eigs[0]
        spread = 0.0
        for eigs in all_eigs[1:]:
            spread = max(spread, float(np.max(np.abs(eigs - first))))
        values = []
        for x in first:
            r = round(x)
            values.append(int(r) if abs(x - r) < snap_tol else float(x))
        return values, spread


# --- exterior calculus -------------------------------------------------------


class ExteriorData:
    """``d eta``, the fundamental 2-form ``Phi``, ``d Phi``, ``eta ^ Phi``."""

    def __init__(self, M, conn=None):
        self.M = M
        n = M.dim
        basis = [[ONE if k == m else ZERO for m in range(n)] for k in range(n)]
        brackets = conn.brackets if conn is not None else None
        if brackets is None:
            brackets = [[None] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    if j < i:
                        brackets[i][j] = [simplify(-c) for c in brackets[j][i]]
                    elif i == j:
                        brackets[i][j] = [ZERO] * n
                    else:
                        brackets[i][j] = M.to_frame(lie_bracket(M.frame[i], M.frame[j]))
        self.brackets = brackets

        eta = M.eta_frame
        # d eta (e_i, e_j)
        self.d_eta = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                val = M.frame[i].apply(eta[j]) - M.frame[j].apply(eta[i])
                val = val - sum((brackets[i][j][k] * eta[k] for k in range(n)
                                 if not _is0(brackets[i][j][k])), ZERO)
                self.d_eta[i][j] = simplify(val)

        # Phi(X, Y) = g(X, phi Y)
        self.Phi = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                self.Phi[i][j] = simplify(M.metric_apply(basis[i], M.phi[j]))

        def phi_form(c, d):
            out = ZERO
            for a in range(n):
                if _is0(c[a]):
                    continue
                for b in range(n):
                    if not _is0(d[b]) and not _is0(self.Phi[a][b]):
                        out = out + c[a] * d[b] * self.Phi[a][b]
            return out

        # d Phi (e_i, e_j, e_k) and (eta ^ Phi)(e_i, e_j, e_k)
        self.d_Phi = {}
        self.eta_wedge_Phi = {}
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    val = M.frame[i].apply(self.Phi[j][k])
                    val = val - M.frame[j].apply(self.Phi[i][k])
                    val = val + M.frame[k].apply(self.Phi[i][j])
                    val = val - phi_form(brackets[i][j], basis[k])
                    val = val + phi_form(brackets[i][k], basis[j])
                    val = val - phi_form(brackets[j][k], basis[i])
                    self.d_Phi[(i, j, k)] = simplify(val)
                    w = eta[i] * self.Phi[j][k] + eta[j] * self.Phi[k][i] + eta[k] * self.Phi[i][j]
                    self.eta_wedge_Phi[(i, j, k)] = simplify(w)


def one_form_d(M, omega_frame, brackets):
    """Exterior derivative of a 1-form given by frame values."""
    n = M.dim
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            val = M.frame[i].apply(omega_frame[j]) - M.frame[j].apply(omega_frame[i])
            val = val - sum((brackets[i][j][k] * omega_frame[k] for k in range(n)
                             if not _is0(brackets[i][j][k])), ZERO)
            out[i][j] = simplify(val)
    return out


def nijenhuis(M):
    """``N_phi(X,Y) = phi^2 [X,Y] + [phi X, phi Y] - phi[phi X, Y]
    - phi[X, phi Y] + 2 d eta(X,Y) xi`` on frame pairs."""
    n = M.dim
    ext = ExteriorData(M)
    phi_fields = [M.from_frame(M.phi[j]) for j in range(n)]
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            br = lie_bracket(M.frame[i], M.frame[j])
            t1 = M.phi_frame_apply(M.phi_frame_apply(M.to_frame(br)))
            t2 = M.to_frame(lie_bracket(phi_fields[i], phi_fields[j]))
            t3 = M.phi_frame_apply(M.to_frame(lie_bracket(phi_fields[i], M.frame[j])))
            t4 = M.phi_frame_apply(M.to_frame(lie_bracket(M.frame[i], phi_fields[j])))
            de = ext.d_eta[i][j]
            comps = []
            for k in range(n):
                val = t1[k] + t2[k] - t3[k] - t4[k] + Rat(2) * de * M.xi_frame[k]
                comps.append(simplify(val))
            out[(i, j)] = comps
    return out
