"""Solve and verify the *-conformal eta-Ricci soliton equation.

Vector form:    L_V g + 2 S* + 2 lambda~ g + 2 mu eta(x)eta = 0
Gradient form:  Hess f + S* + lambda~ g + mu eta(x)eta = 0

The conformal pressure p stays symbolic throughout: the combined
constant lambda~ = lambda - p/2 - 1/(2n+1) is what the equations
determine, and lambda is rendered back as "p/2 + c". A numeric p is
accepted only at classification time.
"""

from __future__ import annotations

from fractions import Fraction

from .curvature import hessian, lie_derivative_metric
from .errors import DegenerateSystem, DivisionByZero, MissingPotential
from .geometry import lie_bracket
from .lstsq import solve_least_squares
from .scalar import Rat, ZERO, evaluate, simplify, to_str
from .structure import CheckReport, _numeric_result, combine


def _coerce(q):
    """Constants arrive as int, Fraction, float or numeric string."""
    if isinstance(q, Rat):
        return q.value
    if isinstance(q, (int, Fraction)):
        return Fraction(q)
    if isinstance(q, str):
        return Fraction(q)
    f = Fraction(q).limit_denominator(10 ** 12)
    return f if abs(float(f) - float(q)) < 1e-15 else float(q)


def _const(q):
    v = _coerce(q)
    return Rat(v if isinstance(v, Fraction) else Fraction(v).limit_denominator(10 ** 15))


def _q_str(q):
    return str(q) if isinstance(q, (int, Fraction)) else repr(float(q))


class SolitonProblem:
    """A manifold, its curvature, and exactly one potential.

    The potential is either a vector field V (vector form) or a scalar
    f (gradient form; the gradient is always derived from f, never
    user-supplied).
    """

    def __init__(self, M, table, V=None, f=None):
        if V is None and f is None:
            raise MissingPotential("soliton problem needs a potential V or f")
        if V is not None and f is not None:
            raise ValueError("supply exactly one of V and f")
        self.M = M
        self.table = table
        self.V = V
        self.f = f

    @property
    def form(self):
        return "vector" if self.V is not None else "gradient"

    def base_tensor(self):
        """The constant-free part of the soliton equation.

        Vector form: L_V g + 2 S*. Gradient form: Hess f + S*.
        """
        M, n = self.M, self.M.dim
        star = self.table.star_ricci
        if self.V is not None:
            lie = lie_derivative_metric(M, self.V)
            out = [[lie[i][j] + Rat(2) * star[i][j] for j in range(n)]
                   for i in range(n)]
        else:
            hess = hessian(M, self.table.conn, self.f)
            out = [[hess[i][j] + star[i][j] for j in range(n)] for i in range(n)]
        return [[simplify(e) for e in row] for row in out]

    def coefficient_tensors(self):
        """Coefficients of (lambda~, mu) in the residual, as matrices."""
        M, n = self.M, self.M.dim
        scale = Rat(2) if self.V is not None else Rat(1)
        g_part = [[simplify(scale * M.metric[i][j]) for j in range(n)]
                  for i in range(n)]
        eta = M.eta_frame
        eta_part = [[simplify(scale * eta[i] * eta[j]) for j in range(n)]
                    for i in range(n)]
        return g_part, eta_part


def soliton_residual(P, lambda_tilde, mu):
    """Residual tensor of the vector-form equation at given constants."""
    if P.V is None:
        raise MissingPotential("vector-form residual needs a vector potential")
    return _residual(P, lambda_tilde, mu)


def gradient_soliton_residual(P, lambda_tilde, mu):
    """Residual tensor of the gradient-form equation at given constants."""
    if P.f is None:
        raise MissingPotential("gradient-form residual needs a scalar potential")
    return _residual(P, lambda_tilde, mu)


def _residual(P, lambda_tilde, mu):
    n = P.M.dim
    base = P.base_tensor()
    g_part, eta_part = P.coefficient_tensors()
    lt, m = _const(lambda_tilde), _const(mu)
    return [[simplify(base[i][j] + lt * g_part[i][j] + m * eta_part[i][j])
             for j in range(n)] for i in range(n)]


class SolitonReport:
    """Solved or verified constants plus the full residual table."""

    def __init__(self, form, n, lambda_tilde, mu, residual, residual_max,
                 exact, mu_unconstrained=False, tol=1e-9):
        self.form = form
        self.n = n
        self.lambda_tilde = lambda_tilde
        self.mu = mu
        self.residual = residual  # simplified frame tensor
        self.residual_max = residual_max
        self.exact = exact
        self.mu_unconstrained = mu_unconstrained
        self.tol = tol

    @property
    def is_soliton(self):
        return self.exact or self.residual_max < self.tol

    def lambda_string(self):
        return lambda_string(self.lambda_tilde, self.n)

    def residual_entries(self):
        dim = len(self.residual)
        return [(i, j, self.residual[i][j])
                for i in range(dim) for j in range(i, dim)]

    def to_dict(self):
        return {
            "form": self.form,
            "lambda_tilde": _q_str(self.lambda_tilde),
            "mu": None if self.mu is None else _q_str(self.mu),
            "mu_unconstrained": self.mu_unconstrained,
            "lambda": self.lambda_string(),
            "residual_max": float(self.residual_max),
            "exact": self.exact,
            "residual": {f"e_{i + 1},e_{j + 1}": to_str(e)
                         for i, j, e in self.residual_entries()},
            "classification": classify(self.lambda_tilde, self.n),
        }


def _fraction_or_none(x):
    return x if isinstance(x, Fraction) else None


def _render_shift(c):
    """Render p/2 + c with exact signs, collapsing c = 0."""
    if isinstance(c, Fraction):
        if c == 0:
            return "p/2"
        sign = "+" if c > 0 else "-"
        mag = abs(c)
        body = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        return f"p/2 {sign} {body}"
    if c == 0.0:
        return "p/2"
    return f"p/2 {'+' if c > 0 else '-'} {abs(c)!r}"


def lambda_string(lambda_tilde, n):
    """lambda = p/2 + 1/(2n+1) + lambda~, rendered symbolically."""
    lt = _coerce(lambda_tilde)
    shift = Fraction(1, 2 * n + 1)
    if isinstance(lt, Fraction):
        return _render_shift(lt + shift)
    return _render_shift(float(lt) + float(shift))


def classify(lambda_tilde, n, p=None):
    """Shrinking / steady / expanding, by the sign of lambda.

    lambda = p/2 + 1/(2n+1) + lambda~ depends on the symbolic pressure,
    so without a numeric p the answer is the threshold statement; with
    one it is a concrete verdict.
    """
    lt = _coerce(lambda_tilde)
    shift = Fraction(1, 2 * n + 1)
    if p is None:
        if isinstance(lt, Fraction):
            p_star = -2 * lt - 2 * shift
        else:
            p_star = float(-2 * lt - 2 * float(shift))
        s = _q_str(p_star)
        return (f"shrinking for p < {s}, steady at p = {s}, "
                f"expanding for p > {s}")
    pv = _coerce(p)
    if isinstance(lt, Fraction) and isinstance(pv, Fraction):
        lam = pv / 2 + shift + lt
    else:
        lam = float(pv) / 2 + float(shift) + float(lt)
    if lam < 0:
        kind = "shrinking"
    elif lam > 0:
        kind = "expanding"
    else:
        kind = "steady"
    return f"{kind} (lambda = {_q_str(lam)} at p = {_q_str(pv)})"


def _max_abs(M, expr):
    """Largest |value| of a simplified expression over the sample set."""
    e = simplify(expr)
    if isinstance(e, Rat):
        return abs(float(e.value))
    worst = 0.0
    for env in M.sampler.points():
        try:
            v = evaluate(e, env)
        except (DivisionByZero, ZeroDivisionError, OverflowError):
            continue
        a = abs(float(v))
        if a > worst:
            worst = a
    return worst


def _report_from_residual(P, lt, mu, residual, exact_fit, mu_unconstrained=False):
    M = P.M
    worst = 0.0
    all_proved = True
    for i in range(M.dim):
        for j in range(i, M.dim):
            e = residual[i][j]
            if isinstance(e, Rat):
                worst = max(worst, abs(float(e.value)))
                if e.value != 0:
                    all_proved = False
            else:
                all_proved = False
                worst = max(worst, _max_abs(M, e))
    exact = exact_fit and all_proved and worst == 0.0
    return SolitonReport(P.form, M.n, lt, mu, residual, worst, exact,
                         mu_unconstrained, tol=M.tol)


def solve_soliton(P):
    """Least-squares (lambda~, mu) over all components and sample points."""
    M = P.M
    n = M.dim
    base = P.base_tensor()
    g_part, eta_part = P.coefficient_tensors()
    entries = []
    for i in range(n):
        for j in range(i, n):
            entries.append((g_part[i][j], eta_part[i][j], base[i][j]))
    rows, rhs = [], []
    for env in M.sampler.points():
        try:
            batch = [(evaluate(a, env), evaluate(b, env), -evaluate(c, env))
                     for a, b, c in entries]
        except (DivisionByZero, ZeroDivisionError, OverflowError):
            continue
        for a, b, c in batch:
            rows.append((a, b))
            rhs.append(c)
    fit = solve_least_squares(rows, rhs)
    lt, mu = fit.values
    if lt is None:
        raise DegenerateSystem("soliton fit degenerate: metric column vanished")
    mu_unconstrained = mu is None
    residual = _residual(P, lt, 0 if mu_unconstrained else mu)
    return _report_from_residual(P, lt, None if mu_unconstrained else mu,
                                 residual, fit.exact, mu_unconstrained)


def verify_soliton(P, lambda_tilde, mu):
    """Residual report at user-supplied constants."""
    lt, m = _coerce(lambda_tilde), _coerce(mu)
    residual = _residual(P, lt, m)
    return _report_from_residual(P, lt, m, residual, True)


def check_kenmotsu_soliton(M, P, report):
    """Consequence checks for a soliton on a Kenmotsu manifold.

    The solved constants must satisfy lambda~ + mu = 0; the potential
    must be a strict infinitesimal contact transformation (L_V eta = 0);
    and the metric must be Einstein with Q = -2n Id.
    """
    n = M.dim
    results = []
    lt = _coerce(report.lambda_tilde)
    mu = _coerce(0 if report.mu is None else report.mu)
    results.append(_numeric_result("constant_sum", float(lt) + float(mu),
                                   M.tol, note="lambda~ + mu"))

    V = P.V if P.V is not None else M.gradient_field(P.f)
    lv_eta = []
    for j in range(n):
        br = M.to_frame(lie_bracket(V, M.frame[j]))
        lv_eta.append(V.apply(M.eta_frame[j]) - M.metric_apply(br, M.xi_frame))
    results.append(combine(M, "strict_contact_potential",
                           [(f"(L_V eta)(e_{j + 1})", lv_eta[j]) for j in range(n)]))

    Q = P.table.ricci_operator
    parts = []
    for i in range(n):
        for k in range(n):
            delta = Rat(2 * M.n) if i == k else ZERO
            parts.append((f"(Q + 2n Id)(e_{i + 1})[{k + 1}]", Q[i][k] + delta))
    results.append(combine(M, "einstein_operator", parts))
    return CheckReport("kenmotsu_soliton", results,
                       {"lambda_tilde_plus_mu": _q_str(lt + mu)})


def check_nullity_soliton(M, P, report, nullity_report):
    """Consequence checks for a soliton on a nullity-type manifold.

    Evaluates the exactness hypothesis lambda~ + mu != 0 and the
    expected degeneracies: S* = 0 and kappa = -2.
    """
    lt = _coerce(report.lambda_tilde)
    mu = _coerce(0 if report.mu is None else report.mu)
    s = lt + mu
    hypothesis = abs(float(s)) >= M.tol

    n = M.dim
    star = P.table.star_ricci
    results = [combine(M, "star_ricci_vanishes",
                       [(f"S*(e_{i + 1}, e_{j + 1})", star[i][j])
                        for i in range(n) for j in range(i, n)])]
    kappa = Fraction(nullity_report.data["kappa"])
    results.append(_numeric_result("kappa_is_minus_two", float(kappa + 2),
                                   M.tol, note=f"kappa = {kappa}"))
    data = {
        "lambda_tilde_plus_mu": _q_str(s),
        "hypothesis_holds": hypothesis,
        "kappa": _q_str(kappa),
    }
    return CheckReport("nullity_soliton", results, data)
