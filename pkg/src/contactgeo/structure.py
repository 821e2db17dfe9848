"""Structure classification: almost contact axioms, Kenmotsu and
almost-Kenmotsu conditions, nullity and eta-Einstein fitting, contact
vector field tests.

Every check reduces tensor identities to componentwise scalar residuals
and runs them through the zero tester, so a failing identity always
carries a witness (component label, sample point, value). Checks run on
all frame index tuples plus a batch of randomized polynomial vector
fields; the random fields catch mistakes that frame-only evaluation
cannot see (wrong derivative terms are invisible on constant-component
inputs).
"""

from __future__ import annotations

from fractions import Fraction

from . import scalar
from .curvature import ExteriorData, lie_derivative_metric
from .errors import DegenerateSystem
from .geometry import lie_bracket, random_vector_fields
from .lstsq import solve_least_squares
from .scalar import Rat, ZERO, ONE, evaluate, simplify, to_str

PROVED_ZERO = "proved_zero"
NUMERICALLY_ZERO = "numerically_zero"
NON_ZERO = "non_zero"

_KIND_RANK = {PROVED_ZERO: 0, NUMERICALLY_ZERO: 1, NON_ZERO: 2}


class CheckResult:
    """One named identity with its worst residual over all components."""

    def __init__(self, name, kind, max_abs, witness=None, note=""):
        self.name = name
        self.kind = kind
        self.max_abs = max_abs
        self.witness = witness  # (component label, point dict, value) or None
        self.note = note

    @property
    def passed(self):
        return self.kind != NON_ZERO

    def to_dict(self):
        w = None
        if self.witness is not None:
            label, point, value = self.witness
            w = {"component": label,
                 "point": {k: str(v) for k, v in point.items()},
                 "value": float(value)}
        d = {"name": self.name, "verdict": self.kind, "max_abs": self.max_abs,
             "witness": w}
        if self.note:
            d["note"] = self.note
        return d

    @classmethod
    def from_dict(cls, d):
        w = d.get("witness")
        witness = None
        if w is not None:
            point = {k: Fraction(v) for k, v in w["point"].items()}
            witness = (w["component"], point, w["value"])
        return cls(d["name"], d["verdict"], d["max_abs"], witness,
                   d.get("note", ""))


class CheckReport:
    """A family of named checks plus optional fitted data."""

    def __init__(self, name, results, data=None):
        self.name = name
        self.results = list(results)
        self.data = dict(data or {})

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def result(self, name):
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [r.to_dict() for r in self.results],
            "data": self.data,
        }

    @classmethod
    def from_dict(cls, d):
        results = [CheckResult.from_dict(c) for c in d["checks"]]
        return cls(d["name"], results, d.get("data", {}))


def _verdict_of(M, expr):
    return scalar.is_zero(expr, M.sampler, tol=M.tol)


def combine(M, name, parts, note=""):
    """Aggregate labeled residual expressions into one CheckResult.

    parts: iterable of (component label, ScalarField). The worst verdict
    wins; the witness points at the first offending component.
    """
    kind = PROVED_ZERO
    max_abs = 0.0
    witness = None
    for label, expr in parts:
        v = _verdict_of(M, expr)
        if v.max_abs > max_abs:
            max_abs = v.max_abs
        if _KIND_RANK[v.kind] > _KIND_RANK[kind]:
            kind = v.kind
            if v.kind == NON_ZERO and witness is None:
                env, value = v.witness
                witness = (label, env, value)
    return CheckResult(name, kind, max_abs, witness, note)


def _numeric_result(name, value, tol, note=""):
    ok = abs(value) < tol
    return CheckResult(name, NUMERICALLY_ZERO if ok else NON_ZERO,
                       abs(float(value)),
                       None if ok else (name, {}, float(value)), note)


def _basis(n):
    return [[ONE if k == m else ZERO for m in range(n)] for k in range(n)]


def _rand_pairs(M, count=10, seed_offset=0):
    fields = random_vector_fields(M, 2 * count, M.seed + 7 + seed_offset)
    return [(fields[2 * i], fields[2 * i + 1]) for i in range(count)]


def check_almost_contact(M):
    """The defining axioms and their standard consequences."""
    n = M.dim
    basis = _basis(n)
    eta = M.eta_frame
    xi = M.xi_frame
    G = M.metric
    phi2 = [M.phi_frame_apply(M.phi[j]) for j in range(n)]

    parts_sq = []
    for j in range(n):
        for k in range(n):
            delta = ONE if j == k else ZERO
            e = phi2[j][k] + delta - eta[j] * xi[k]
            parts_sq.append((f"(phi^2 + Id - eta(x)xi)(e_{j + 1})[{k + 1}]", e))
    rand = _rand_pairs(M)
    for idx, (X, _) in enumerate(rand):
        c = M.to_frame(X)
        p2 = M.phi_frame_apply(M.phi_frame_apply(c))
        ex = M.eta_apply(c)
        for k in range(n):
            parts_sq.append((f"(phi^2 + Id - eta(x)xi)(X_{idx})[{k + 1}]",
                             p2[k] + c[k] - ex * xi[k]))

    parts_comp = []
    for i in range(n):
        for j in range(i, n):
            e = M.metric_apply(M.phi[i], M.phi[j]) - G[i][j] + eta[i] * eta[j]
            parts_comp.append((f"compat(e_{i + 1}, e_{j + 1})", e))
    for idx, (X, Y) in enumerate(rand):
        cx, cy = M.to_frame(X), M.to_frame(Y)
        e = (M.metric_apply(M.phi_frame_apply(cx), M.phi_frame_apply(cy))
             - M.metric_apply(cx, cy) + M.eta_apply(cx) * M.eta_apply(cy))
        parts_comp.append((f"compat(X_{idx}, Y_{idx})", e))

    phi_xi = M.phi_frame_apply(xi)
    parts_anti = []
    for i in range(n):
        for j in range(i, n):
            e = M.metric_apply(M.phi[i], basis[j]) + M.metric_apply(basis[i], M.phi[j])
            parts_anti.append((f"antisym(e_{i + 1}, e_{j + 1})", e))

    results = [
        combine(M, "phi_square", parts_sq),
        combine(M, "reeb_normalization",
                [("eta(xi) - 1", M.metric_apply(xi, xi) - ONE)]),
        combine(M, "metric_compatibility", parts_comp),
        combine(M, "phi_reeb",
                [(f"(phi xi)[{k + 1}]", phi_xi[k]) for k in range(n)]),
        combine(M, "eta_phi",
                [(f"eta(phi e_{j + 1})", M.metric_apply(M.phi[j], xi))
                 for j in range(n)]),
        combine(M, "eta_metric_duality",
                [(f"g(e_{j + 1}, xi) - eta(e_{j + 1})",
                  M.metric_apply(basis[j], xi) - eta[j]) for j in range(n)]),
        combine(M, "phi_antisymmetry", parts_anti),
    ]
    return CheckReport("almost_contact", results)


def check_kenmotsu(M, conn, table):
    """The covariant characterization plus its derived identities."""
    n = M.dim
    two_n = Rat(2 * M.n)
    basis = _basis(n)
    eta = M.eta_frame
    xi = M.xi_frame
    G = M.metric

    def nabla_phi(x_frame, y_frame):
        # (nabla_X phi)Y = nabla_X(phi Y) - phi(nabla_X Y)
        a = conn.nabla_comps(x_frame, M.phi_frame_apply(y_frame))
        b = M.phi_frame_apply(conn.nabla_comps(x_frame, y_frame))
        return [p - q for p, q in zip(a, b)]

    parts_b8 = []
    for i in range(n):
        for j in range(n):
            lhs = nabla_phi(basis[i], basis[j])
            coeff = M.metric_apply(M.phi[i], basis[j])
            for k in range(n):
                e = lhs[k] - coeff * xi[k] + eta[j] * M.phi[i][k]
                parts_b8.append((f"(nabla_e{i + 1} phi)e_{j + 1}[{k + 1}]", e))
    for idx, (X, Y) in enumerate(_rand_pairs(M, 10, 1)):
        cx, cy = M.to_frame(X), M.to_frame(Y)
        lhs = nabla_phi(cx, cy)
        phix = M.phi_frame_apply(cx)
        coeff = M.metric_apply(phix, cy)
        ey = M.eta_apply(cy)
        for k in range(n):
            parts_b8.append((f"(nabla_X{idx} phi)Y{idx}[{k + 1}]",
                             lhs[k] - coeff * xi[k] + ey * phix[k]))

    parts_b9 = []
    for i in range(n):
        nx = conn.nabla_comps(basis[i], xi)
        for k in range(n):
            e = nx[k] - (ONE if i == k else ZERO) + eta[i] * xi[k]
            parts_b9.append((f"(nabla_e{i + 1} xi - e_{i + 1} + eta xi)[{k + 1}]", e))

    parts_b10 = []
    for i in range(n):
        for j in range(n):
            de = M.frame[i].apply(eta[j]) - M.metric_apply(conn.gamma[i][j], xi)
            e = de - G[i][j] + eta[i] * eta[j]
            parts_b10.append((f"(nabla eta - g + eta(x)eta)(e_{i + 1}, e_{j + 1})", e))

    parts_b11 = []
    for i in range(n):
        for j in range(i + 1, n):
            rv = table.riemann_apply(basis[i], basis[j], xi)
            for k in range(n):
                e = rv[k] - eta[i] * (ONE if j == k else ZERO) \
                    + eta[j] * (ONE if i == k else ZERO)
                parts_b11.append((f"R(e_{i + 1}, e_{j + 1})xi[{k + 1}]", e))

    parts_b12 = []
    for i in range(n):
        s = sum((table.ricci[i][j] * xi[j] for j in range(n)), ZERO)
        parts_b12.append((f"S(e_{i + 1}, xi) + 2n eta(e_{i + 1})",
                          s + two_n * eta[i]))

    lg = lie_derivative_metric(M, M.xi)
    parts_b13 = []
    for i in range(n):
        for j in range(i, n):
            e = lg[i][j] - Rat(2) * G[i][j] + Rat(2) * eta[i] * eta[j]
            parts_b13.append((f"(L_xi g - 2g + 2eta(x)eta)(e_{i + 1}, e_{j + 1})", e))

    Q = table.ricci_operator
    parts_c1 = []
    for i in range(n):
        dQ = conn.nabla_operator(Q, basis[i])
        # (nabla_X Q)(xi) by linearity over the frame images
        img = [sum((xi[j] * dQ[j][k] for j in range(n)), ZERO) for k in range(n)]
        for k in range(n):
            e = img[k] + Q[i][k] + two_n * (ONE if i == k else ZERO)
            parts_c1.append((f"((nabla_e{i + 1} Q)xi + Q e_{i + 1} + 2n e_{i + 1})[{k + 1}]", e))

    dQxi = conn.nabla_operator(Q, xi)
    parts_c2 = []
    for i in range(n):
        for k in range(n):
            e = dQxi[i][k] + Rat(2) * Q[i][k] + Rat(4 * M.n) * (ONE if i == k else ZERO)
            parts_c2.append((f"((nabla_xi Q)e_{i + 1} + 2Q e_{i + 1} + 4n e_{i + 1})[{k + 1}]", e))

    coef = Rat(2 * M.n - 1)
    parts_c3 = []
    for i in range(n):
        for j in range(i, n):
            e = table.star_ricci[i][j] - table.ricci[i][j] - coef * G[i][j] \
                - eta[i] * eta[j]
            parts_c3.append((f"(S* - S - (2n-1)g - eta(x)eta)(e_{i + 1}, e_{j + 1})", e))

    results = [
        combine(M, "covariant_phi", parts_b8),
        combine(M, "covariant_reeb", parts_b9),
        combine(M, "covariant_eta", parts_b10),
        combine(M, "curvature_reeb", parts_b11),
        combine(M, "ricci_reeb", parts_b12),
        combine(M, "reeb_metric_flow", parts_b13),
        combine(M, "ricci_operator_reeb_derivative", parts_c1),
        combine(M, "ricci_operator_reeb_flow", parts_c2),
        combine(M, "star_ricci_from_ricci", parts_c3),
    ]
    return CheckReport("kenmotsu", results)


def check_almost_kenmotsu(M, conn, table, tensors, ext=None):
    """d eta = 0, d Phi = 2 eta ^ Phi, and the h-tensor identities."""
    n = M.dim
    basis = _basis(n)
    eta = M.eta_frame
    xi = M.xi_frame
    if ext is None:
        ext = ExteriorData(M, conn)

    parts_eta = [(f"d eta(e_{i + 1}, e_{j + 1})", ext.d_eta[i][j])
                 for i in range(n) for j in range(i + 1, n)]
    parts_phi = [(f"(dPhi - 2 eta^Phi)(e_{i + 1}, e_{j + 1}, e_{k + 1})",
                  ext.d_Phi[(i, j, k)] - Rat(2) * ext.eta_wedge_Phi[(i, j, k)])
                 for (i, j, k) in sorted(ext.d_Phi)]

    h, hp = tensors.h, tensors.h_prime
    h_xi = [sum((xi[j] * h[j][k] for j in range(n)), ZERO) for k in range(n)]
    hp_xi = [sum((xi[j] * hp[j][k] for j in range(n)), ZERO) for k in range(n)]
    parts_b16 = [(f"(h xi)[{k + 1}]", h_xi[k]) for k in range(n)]
    parts_b16 += [(f"(h' xi)[{k + 1}]", hp_xi[k]) for k in range(n)]

    parts_b17 = []
    for j in range(n):
        hphi = M.phi_frame_apply([h[j][k] for k in range(n)])  # phi(h e_j)
        phih_j = [sum((M.phi[j][m] * h[m][k] for m in range(n)), ZERO)
                  for k in range(n)]  # h(phi e_j)
        for k in range(n):
            parts_b17.append((f"(h phi + phi h)(e_{j + 1})[{k + 1}]",
                              phih_j[k] + hphi[k]))

    tr_h = sum((h[j][j] for j in range(n)), ZERO)
    tr_hp = sum((hp[j][j] for j in range(n)), ZERO)

    parts_b18 = []
    for i in range(n):
        nx = conn.nabla_comps(basis[i], xi)
        for k in range(n):
            e = nx[k] - (ONE if i == k else ZERO) + eta[i] * xi[k] - hp[i][k]
            parts_b18.append((f"(nabla_e{i + 1} xi - e - eta xi - h')[{k + 1}]", e))

    # curvature against the Reeb field must close over h':
    # R(X,Y)xi = eta(X)(Y + h'Y) - eta(Y)(X + h'X) + (nabla_X h')Y - (nabla_Y h')X
    parts_b19 = []
    dhp = [conn.nabla_operator(hp, basis[i]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rv = table.riemann_apply(basis[i], basis[j], xi)
            for k in range(n):
                e = rv[k]
                e = e - eta[i] * ((ONE if j == k else ZERO) + hp[j][k])
                e = e + eta[j] * ((ONE if i == k else ZERO) + hp[i][k])
                e = e - (dhp[i][j][k] - dhp[j][i][k])
                parts_b19.append((f"R(e_{i + 1}, e_{j + 1})xi shape[{k + 1}]", e))

    results = [
        combine(M, "eta_closed", parts_eta),
        combine(M, "fundamental_form_scaling", parts_phi),
        combine(M, "h_reeb_annihilation", parts_b16),
        combine(M, "h_phi_anticommute", parts_b17),
        combine(M, "h_traceless", [("tr h", tr_h), ("tr h'", tr_hp)]),
        combine(M, "covariant_reeb_shape", parts_b18),
        combine(M, "curvature_reeb_shape", parts_b19),
    ]
    return CheckReport("almost_kenmotsu", results)


def solve_nullity(M, conn, table, tensors):
    """Fit R(X,Y)xi against the nullity ansatz and cross-check theory."""
    n = M.dim
    two_n = 2 * M.n
    basis = _basis(n)
    eta = M.eta_frame
    xi = M.xi_frame
    G = M.metric
    hp = tensors.h_prime

    rows = []
    rhs = []
    coeff_exprs = []
    for i in range(n):
        for j in range(i + 1, n):
            rv = table.riemann_apply(basis[i], basis[j], xi)
            for k in range(n):
                a_k = eta[j] * (ONE if i == k else ZERO) - eta[i] * (ONE if j == k else ZERO)
                a_m = eta[j] * hp[i][k] - eta[i] * hp[j][k]
                coeff_exprs.append((simplify(a_k), simplify(a_m), simplify(rv[k])))
    pts = M.sampler.points()
    for env in pts:
        for a_k, a_m, b in coeff_exprs:
            rows.append((evaluate(a_k, env), evaluate(a_m, env)))
            rhs.append(evaluate(b, env))
    fit = solve_least_squares(rows, rhs)
    kappa, mu = fit.values
    if kappa is None:
        raise DegenerateSystem("curvature rows never constrain the nullity fit")
    mu_unconstrained = mu is None

    def c(x):
        return Rat(Fraction(x)) if isinstance(x, (int, Fraction)) else Rat(Fraction(x).limit_denominator(10 ** 12))

    kap = c(kappa)
    mu_eff = ZERO if mu_unconstrained else c(mu)

    checks = []
    hp2 = tensors.h_prime_squared()
    parts = []
    for i in range(n):
        for k in range(n):
            delta = ONE if i == k else ZERO
            e = hp2[i][k] + (kap + ONE) * (delta - eta[i] * xi[k])
            parts.append((f"(h'^2 + (k+1)(Id - eta(x)xi))(e_{i + 1})[{k + 1}]", e))
    checks.append(combine(M, "h_prime_square", parts))

    parts = []
    for i in range(n):
        for j in range(n):
            rv = table.riemann_apply(xi, basis[i], basis[j])
            hpi = [hp[i][k] for k in range(n)]
            ghij = M.metric_apply(hpi, basis[j])
            for k in range(n):
                e = rv[k] - kap * (G[i][j] * xi[k] - eta[j] * (ONE if i == k else ZERO))
                e = e - mu_eff * (ghij * xi[k] - eta[j] * hpi[k])
                parts.append((f"R(xi, e_{i + 1})e_{j + 1} shape[{k + 1}]", e))
    checks.append(combine(M, "reeb_curvature_operator", parts))

    parts = []
    for i in range(n):
        for k in range(n):
            delta = ONE if i == k else ZERO
            e = table.ricci_operator[i][k] + Rat(two_n) * delta \
                - Rat(two_n) * (kap + ONE) * eta[i] * xi[k] + Rat(two_n) * hp[i][k]
            parts.append((f"(Q + 2n Id - 2n(k+1)eta(x)xi + 2n h')(e_{i + 1})[{k + 1}]", e))
    checks.append(combine(M, "ricci_operator_form", parts))

    checks.append(combine(M, "scalar_curvature_value",
                          [("r - 2n(k - 2n)",
                            table.scalar_curvature - Rat(two_n) * (kap - Rat(two_n)))]))

    parts = []
    for i in range(n):
        for j in range(n):
            de = M.frame[i].apply(eta[j]) - M.metric_apply(conn.gamma[i][j], xi)
            hpi = [hp[i][k] for k in range(n)]
            e = de - G[i][j] + eta[i] * eta[j] - M.metric_apply(hpi, basis[j])
            parts.append((f"(nabla eta - g + eta(x)eta - g(h'.,.))(e_{i + 1}, e_{j + 1})", e))
    checks.append(combine(M, "covariant_eta_shape", parts))

    spectrum, spread = tensors.spectrum()
    alpha = max(abs(float(x)) for x in spectrum)
    checks.append(_numeric_result("spectrum_consistency",
                                  alpha * alpha + float(kappa) + 1.0, M.tol,
                                  note=f"spectrum {spectrum}, spread {spread:.3g}"))

    parts = []
    for i in range(n):
        for j in range(i, n):
            e = table.star_ricci[i][j] + (kap + Rat(2)) * (G[i][j] - eta[i] * eta[j])
            parts.append((f"(S* + (k+2)(g - eta(x)eta))(e_{i + 1}, e_{j + 1})", e))
    checks.append(combine(M, "star_ricci_form", parts))

    data = {
        "kappa": _num_str(kappa),
        "mu": None if mu_unconstrained else _num_str(mu),
        "mu_unconstrained": mu_unconstrained,
        "residual_max": float(fit.residual_max),
        "exact": fit.exact,
        "spectrum": [_num_str(x) for x in spectrum],
        "spectrum_spread": float(spread),
    }
    fit_ok = fit.residual_max < M.tol
    results = [CheckResult("nullity_fit",
                           NUMERICALLY_ZERO if fit_ok else NON_ZERO,
                           float(fit.residual_max),
                           None if fit_ok else ("nullity fit residual", {},
                                                float(fit.residual_max)))]
    results += checks
    return CheckReport("nullity", results, data)


def _num_str(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def solve_eta_einstein(M, table):
    """Least-squares fit S = a g + b eta(x)eta."""
    n = M.dim
    eta = M.eta_frame
    G = M.metric
    rows = []
    rhs = []
    exprs = []
    for i in range(n):
        for j in range(i, n):
            exprs.append((G[i][j], simplify(eta[i] * eta[j]), table.ricci[i][j]))
    for env in M.sampler.points():
        for a, b, s in exprs:
            rows.append((evaluate(a, env), evaluate(b, env)))
            rhs.append(evaluate(s, env))
    fit = solve_least_squares(rows, rhs)
    a, b = fit.values
    if a is None:
        raise DegenerateSystem("metric column vanished; manifest is degenerate")
    if b is None:
        raise DegenerateSystem("eta(x)eta column vanished; eta is degenerate")
    fit_ok = fit.residual_max < M.tol
    einstein = fit_ok and abs(float(b)) < M.tol

    # Kenmotsu consistency: with S = a g + b eta(x)eta one must have
    # a + b = -2n, a = 1 + r/2n, b = -(2n+1+r/2n). Only meaningful when
    # the scalar curvature is constant; reported as data, not a verdict.
    r_const = simplify(table.scalar_curvature)
    consistency = None
    if isinstance(r_const, Rat):
        r = r_const.value
        a_exp = 1 + Fraction(r, 2 * M.n)
        b_exp = -(2 * M.n + 1 + Fraction(r, 2 * M.n))
        consistency = {
            "a_expected": _num_str(a_exp),
            "b_expected": _num_str(b_exp),
            "sum_rule": _num_str(Fraction(-2 * M.n)),
            "matches": bool(fit_ok
                            and abs(float(a) - float(a_exp)) < M.tol
                            and abs(float(b) - float(b_exp)) < M.tol),
        }
    data = {
        "a": _num_str(a),
        "b": _num_str(b),
        "residual_max": float(fit.residual_max),
        "exact": fit.exact,
        "einstein": einstein,
        "kenmotsu_consistency": consistency,
    }
    results = [CheckResult("eta_einstein_fit",
                           NUMERICALLY_ZERO if fit_ok else NON_ZERO,
                           float(fit.residual_max),
                           None if fit_ok else ("eta-Einstein fit residual", {},
                                                float(fit.residual_max)))]
    return CheckReport("eta_einstein", results, data)


def check_contact_field(M, V):
    """Classify a candidate contact vector field.

    contact: [V, xi] = f xi for some function f;
    infinitesimal contact transformation: L_V eta = c eta;
    strict: L_V eta = 0.
    """
    n = M.dim
    w = M.to_frame(lie_bracket(V, M.xi))
    f_field = simplify(M.metric_apply(w, M.xi_frame))
    remainder = [(f"([V,xi] - f xi)[{k + 1}]",
                  w[k] - f_field * M.xi_frame[k]) for k in range(n)]
    contact = combine(M, "contact_field", remainder)

    lv_eta = []
    for j in range(n):
        br = M.to_frame(lie_bracket(V, M.frame[j]))
        lv_eta.append(simplify(V.apply(M.eta_frame[j]) - M.metric_apply(br, M.xi_frame)))
    c_field = simplify(sum((M.xi_frame[j] * lv_eta[j] for j in range(n)), ZERO))
    infinitesimal = combine(
        M, "infinitesimal_contact",
        [(f"(L_V eta - c eta)(e_{j + 1})", lv_eta[j] - c_field * M.eta_frame[j])
         for j in range(n)])
    strict = combine(M, "strict_contact",
                     [(f"(L_V eta)(e_{j + 1})", lv_eta[j]) for j in range(n)])

    data = {
        "f": to_str(f_field),
        "eta_factor": to_str(c_field),
        "is_contact": contact.passed,
        "is_infinitesimal_contact": infinitesimal.passed,
        "is_strict": strict.passed,
    }
    return CheckReport("contact_field", [contact, infinitesimal, strict], data)
