"""Frames, metrics, and almost contact data over a coordinate chart.

A manifold is declared by a global frame: each frame vector is given by
its coordinate components, the metric and the structure endomorphism phi
are given by their matrices on that frame, and the Reeb field xi is one
frame vector (or any frame combination).  The dual 1-form eta is always
derived as ``eta = g(., xi)``; it is never an independent input.

Conventions used throughout:

* ``frame`` rows are vectors: ``E[k][j]`` is the j-th coordinate
  component of ``e_k``;
* ``phi`` rows are images: ``phi(e_j) = sum_k P[j][k] e_k``;
* a vector's frame components ``c`` satisfy ``X = sum_k c[k] e_k``.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import scalar
from .errors import SingularFrame, ValidationError
from .scalar import Rat, Sampler, ZERO, ONE, is_zero, evaluate

Number = (int, Fraction)


class VectorField:
    """Coordinate-component vector field on a chart."""

    __slots__ = ("coords", "comps")

    def __init__(self, coords, comps):
        self.coords = tuple(coords)
        comps = tuple(comps)
        if len(comps) != len(self.coords):
            raise ValidationError(
                f"vector field has {len(comps)} components on a "
                f"{len(self.coords)}-dimensional chart"
            )
        self.comps = comps

    def apply(self, f):
        """Derivation: ``X(f) = sum_i X^i df/dx_i``."""
        out = ZERO
        for name, c in zip(self.coords, self.comps):
            out = out + c * scalar.diff(f, name)
        return out

    def __add__(self, other):
        self._check(other)
        return VectorField(self.coords, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        self._check(other)
        return VectorField(self.coords, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return VectorField(self.coords, [-a for a in self.comps])

    def scale(self, f):
        """Multiply by a scalar field (or exact constant)."""
        if isinstance(f, Number):
            f = Rat(f)
        return VectorField(self.coords, [f * a for a in self.comps])

    def _check(self, other):
        if not isinstance(other, VectorField) or other.coords != self.coords:
            raise ValidationError("vector fields live on different charts")

    def __eq__(self, other):
        return (
            isinstance(other, VectorField)
            and other.coords == self.coords
            and other.comps == self.comps
        )

    def __repr__(self):
        body = ", ".join(scalar.to_str(c) for c in self.comps)
        return f"VectorField({body})"


def lie_bracket(X, Y):
    """``[X, Y]^k = sum_i (X^i dY^k/dx_i - Y^i dX^k/dx_i)``."""
    X._check(Y)
    comps = []
    for k in range(len(X.coords)):
        out = ZERO
        for i, name in enumerate(X.coords):
            out = out + X.comps[i] * scalar.diff(Y.comps[k], name)
            out = out - Y.comps[i] * scalar.diff(X.comps[k], name)
        comps.append(out)
    return VectorField(X.coords, comps)


def sym_inverse(mat):
    """Invert a square matrix of scalar fields by Gauss-Jordan.

    Returns ``(inverse, determinant)``.  Pivots are entries that do not
    simplify to the zero constant; a column with no such entry raises.
    """
    n = len(mat)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(mat)]
    det = ONE
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            entry = aug[r][col]
            if not (isinstance(entry, Rat) and entry.value == 0):
                pivot_row = r
                break
        if pivot_row is None:
            raise SingularFrame("matrix of scalar fields has a structurally zero column")
        if pivot_row != col:
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
            det = -det
        pivot = aug[col][col]
        det = det * pivot
        inv_pivot = ONE / pivot
        aug[col] = [x * inv_pivot for x in aug[col]]
        for r in range(n):
            if r == col:
                continue
            factor = aug[r][col]
            if isinstance(factor, Rat) and factor.value == 0:
                continue
            aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    inv = [row[n:] for row in aug]
    return inv, scalar.simplify(det)


def _mat_vec(mat, vec):
    """Row-vector times matrix: ``out[k] = sum_j vec[j] mat[j][k]``."""
    n = len(mat)
    return [sum((vec[j] * mat[j][k] for j in range(n)), ZERO) for k in range(n)]


class ManifoldSpec:
    """Validated manifold data plus cached derived quantities."""

    def __init__(self, name, coords, frame, metric, phi, xi, box=None,
                 nonvanish=(), seed=1729, samples=50, tol=1e-9):
        self.name = name
        self.coords = tuple(coords)
        self.dim = len(self.coords)
        if self.dim % 2 == 0 or self.dim < 3:
            raise ValidationError(
                f"almost contact structures need odd dimension >= 3, got {self.dim}"
            )
        self.n = (self.dim - 1) // 2
        if len(frame) != self.dim:
            raise ValidationError(f"expected {self.dim} frame vectors, got {len(frame)}")
        self.frame = [v if isinstance(v, VectorField) else VectorField(self.coords, v)
                      for v in frame]
        self.metric = [[scalar.simplify(x) for x in row] for row in metric]
        self._require_square(self.metric, "metric_frame")
        for i in range(self.dim):
            for j in range(i):
                if self.metric[i][j] != self.metric[j][i]:
                    raise ValidationError(
                        f"metric_frame is not symmetric at ({i}, {j})"
                    )
        self.phi = [[scalar.simplify(x) for x in row] for row in phi]
        self._require_square(self.phi, "phi_frame")

        if isinstance(xi, int):
            if not 0 <= xi < self.dim:
                raise ValidationError(f"xi frame index {xi} out of range")
            self.xi_frame = [ONE if k == xi else ZERO for k in range(self.dim)]
            self.xi = self.frame[xi]
        else:
            xi = xi if isinstance(xi, VectorField) else VectorField(self.coords, xi)
            self.xi = xi
            self.xi_frame = None  # resolved after the frame inverse exists

        self.tol = tol
        nonvanish = tuple(scalar.parse(e) if isinstance(e, str) else e
                          for e in nonvanish)
        self.sampler = Sampler(self.coords, box or {}, nonvanish=nonvanish,
                               seed=seed, count=samples)
        self.seed = seed
        self.samples = samples

        E = [list(v.comps) for v in self.frame]
        self.frame_matrix = E
        self.frame_inverse, self.frame_det = sym_inverse(E)
        self.metric_inverse, self.metric_det = sym_inverse(self.metric)

        if self.xi_frame is None:
            self.xi_frame = self.to_frame(self.xi)
        # eta on the frame: eta_j = g(e_j, xi)
        self.eta_frame = [
            scalar.simplify(sum((self.xi_frame[k] * self.metric[j][k]
                                 for k in range(self.dim)), ZERO))
            for j in range(self.dim)
        ]
        self._validate_nondegeneracy()

    def _require_square(self, mat, label):
        if len(mat) != self.dim or any(len(row) != self.dim for row in mat):
            raise ValidationError(f"{label} must be {self.dim}x{self.dim}")

    def _validate_nondegeneracy(self):
        for label, det in (("frame", self.frame_det), ("metric_frame", self.metric_det)):
            for env in self.sampler.points():
                val = evaluate(det, env)
                if abs(float(val)) < self.tol:
                    point = {k: str(v) for k, v in env.items()}
                    raise SingularFrame(
                        f"det({label}) vanishes on the sampling domain", witness=point
                    )

    # --- frame algebra -----------------------------------------------------

    def to_frame(self, X):
        """Frame components of a coordinate vector field."""
        if isinstance(X, VectorField):
            comps = X.comps
        else:
            comps = tuple(X)
        return [scalar.simplify(c) for c in _mat_vec(self.frame_inverse, list(comps))]

    def from_frame(self, c):
        """Coordinate vector field with the given frame components."""
        comps = [ZERO] * self.dim
        for k in range(self.dim):
            ck = c[k] if isinstance(c[k], scalar.ScalarField) else Rat(c[k])
            for j in range(self.dim):
                comps[j] = comps[j] + ck * self.frame[k].comps[j]
        return VectorField(self.coords, comps)

    def _frame_comps(self, X):
        if isinstance(X, VectorField):
            return self.to_frame(X)
        return list(X)

    def metric_apply(self, X, Y):
        """``g(X, Y)`` for coordinate fields or frame-component lists."""
        c = self._frame_comps(X)
        d = self._frame_comps(Y)
        out = ZERO
        for i in range(self.dim):
            if isinstance(c[i], Rat) and c[i].value == 0:
                continue
            for j in range(self.dim):
                out = out + c[i] * d[j] * self.metric[i][j]
        return out

    def eta_apply(self, X):
        """``eta(X) = g(X, xi)``."""
        c = self._frame_comps(X)
        return scalar.simplify(sum((c[j] * self.eta_frame[j] for j in range(self.dim)), ZERO))

    def phi_frame_apply(self, c):
        """phi acting on frame components."""
        return _mat_vec(self.phi, list(c))

    def phi_apply(self, X):
        """phi acting on a coordinate vector field."""
        return self.from_frame(self.phi_frame_apply(self.to_frame(X)))

    def frame_apply(self, f):
        """List of derivations ``e_k(f)``."""
        return [v.apply(f) for v in self.frame]

    def sharp(self, omega_frame):
        """Raise a covector given by its frame values ``omega_k = omega(e_k)``."""
        n = self.dim
        return [
            scalar.simplify(sum((self.metric_inverse[m][k] * omega_frame[k]
                                 for k in range(n)), ZERO))
            for m in range(n)
        ]

    def gradient(self, f):
        """Frame components of ``grad f``: ``g(grad f, X) = X(f)``."""
        return self.sharp(self.frame_apply(f))

    def gradient_field(self, f):
        return self.from_frame(self.gradient(f))

    def is_zero_field(self, e, tol=None):
        return is_zero(e, self.sampler, self.tol if tol is None else tol)


def random_polynomial(rng, coords, degree=1):
    """Small integer-coefficient polynomial in the chart coordinates."""
    out = Rat(rng.randint(-2, 2))
    for name in coords:
        c = rng.randint(-2, 2)
        if c:
            out = out + Rat(c) * scalar.sym(name)
    if degree >= 2:
        a = rng.choice(coords)
        b = rng.choice(coords)
        c = rng.randint(-1, 1)
        if c:
            out = out + Rat(c) * scalar.sym(a) * scalar.sym(b)
    return out


def random_vector_fields(M, count, seed, degree=1):
    """Deterministic list of polynomial-coefficient vector fields."""
    rng = random.Random(seed)
    fields = []
    for _ in range(count):
        comps = [random_polynomial(rng, M.coords, degree) for _ in range(M.dim)]
        fields.append(VectorField(M.coords, comps))
    return fields
