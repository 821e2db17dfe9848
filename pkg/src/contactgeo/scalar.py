"""Exact scalar fields over a coordinate chart.

The expression grammar is deliberately small: rational constants,
coordinate symbols, ``+ - * /``, integer powers, and ``exp``.  Every
arithmetic operation returns a tree in a canonical sum-of-products form:

* sums are flattened, like monomials merged, terms sorted;
* products are flattened, rational coefficients folded together, factors
  sorted, repeated bases merged, and exp factors multiplied out into a
  single node (``exp(a)*exp(b) -> exp(a+b)``, ``exp(a)^n -> exp(n*a)``);
* small positive integer powers of sums are expanded, so polynomial
  cancellations collapse to the literal zero constant.

Because canonical forms are closed under the arithmetic, ``simplify`` is
idempotent.  Differentiation is exact, and evaluation is exact over the
rationals whenever the expression contains no exp node.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import DivisionByZero, ExpressionError, InsufficientSamples, ParseError

_EXPAND_LIMIT = 6  # largest positive power of a sum that gets multiplied out


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ExpressionError(f"cannot interpret {x!r} as an exact rational")


class ScalarField:
    """Base node; all instances are immutable and canonical."""

    __slots__ = ("_hash", "_key")

    def _coerce(self, other):
        if isinstance(other, ScalarField):
            return other
        if isinstance(other, (int, Fraction)):
            return Rat(_as_fraction(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, neg(other))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(other, neg(self))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return div(other, self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise ExpressionError("only integer powers are supported")
        return pow_int(self, n)

    def __repr__(self):
        return f"<{type(self).__name__} {to_str(self)}>"

    def __str__(self):
        return to_str(self)


class Rat(ScalarField):
    __slots__ = ("value",)

    def __init__(self, value):
        object.__setattr__(self, "value", _as_fraction(value))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        return type(other) is Rat and self.value == other.value

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash(("Rat", self.value))
            object.__setattr__(self, "_hash", h)
            return h


class Sym(ScalarField):
    __slots__ = ("name",)

    def __init__(self, name):
        object.__setattr__(self, "name", name)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        return type(other) is Sym and self.name == other.name

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash(("Sym", self.name))
            object.__setattr__(self, "_hash", h)
            return h


class Exp(ScalarField):
    __slots__ = ("arg",)

    def __init__(self, arg):
        object.__setattr__(self, "arg", arg)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        return type(other) is Exp and self.arg == other.arg

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash(("Exp", self.arg))
            object.__setattr__(self, "_hash", h)
            return h


class Pow(ScalarField):
    """Integer power with base restricted to a symbol or an opaque sum."""

    __slots__ = ("base", "exponent")

    def __init__(self, base, exponent):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        return (
            type(other) is Pow
            and self.exponent == other.exponent
            and self.base == other.base
        )

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash(("Pow", self.base, self.exponent))
            object.__setattr__(self, "_hash", h)
            return h


class Mul(ScalarField):
    __slots__ = ("factors",)

    def __init__(self, factors):
        object.__setattr__(self, "factors", tuple(factors))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        return type(other) is Mul and self.factors == other.factors

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash(("Mul",) + self.factors)
            object.__setattr__(self, "_hash", h)
            return h


class Add(ScalarField):
    __slots__ = ("terms",)

    def __init__(self, terms):
        object.__setattr__(self, "terms", tuple(terms))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        return type(other) is Add and self.terms == other.terms

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash(("Add",) + self.terms)
            object.__setattr__(self, "_hash", h)
            return h


ZERO = Rat(0)
ONE = Rat(1)
MINUS_ONE = Rat(-1)


def sort_key(e):
    """Total order on canonical nodes (used to sort terms and factors)."""
    try:
        return e._key
    except AttributeError:
        pass
    if isinstance(e, Rat):
        k = (0, e.value)
    elif isinstance(e, Sym):
        k = (1, e.name)
    elif isinstance(e, Exp):
        k = (2, sort_key(e.arg))
    elif isinstance(e, Pow):
        k = (3, sort_key(e.base), e.exponent)
    elif isinstance(e, Mul):
        k = (4, tuple(sort_key(f) for f in e.factors))
    else:
        k = (5, tuple(sort_key(t) for t in e.terms))
    object.__setattr__(e, "_key", k)
    return k


# --- term/monomial bookkeeping -------------------------------------------
#
# A term is (coefficient, factor map, exp argument): the factor map sends a
# base node (Sym, or opaque Add) to its integer exponent, and the exp
# argument collects the merged argument of every exp factor (None if the
# term has no exp part).


def _split_term(e):
    """Decompose a canonical non-Add node into (coeff, factors, exp_arg)."""
    if isinstance(e, Rat):
        return e.value, {}, None
    if isinstance(e, Sym):
        return Fraction(1), {e: 1}, None
    if isinstance(e, Exp):
        return Fraction(1), {}, e.arg
    if isinstance(e, Pow):
        return Fraction(1), {e.base: e.exponent}, None
    if isinstance(e, Mul):
        coeff = Fraction(1)
        factors = {}
        exp_arg = None
        for f in e.factors:
            if isinstance(f, Rat):
                coeff *= f.value
            elif isinstance(f, Sym):
                factors[f] = factors.get(f, 0) + 1
            elif isinstance(f, Pow):
                factors[f.base] = factors.get(f.base, 0) + f.exponent
            elif isinstance(f, Exp):
                exp_arg = f.arg if exp_arg is None else add(exp_arg, f.arg)
            else:  # pragma: no cover - canonical Mul never nests Add/Mul
                raise ExpressionError("non-canonical product factor")
        return coeff, factors, exp_arg
    raise ExpressionError("sum cannot be a single term")  # pragma: no cover


def _build_term(coeff, factors, exp_arg):
    """Rebuild a canonical node from a decomposed term.

    May return a full Add when an expandable sum power shows up after
    exponent merging.
    """
    if coeff == 0:
        return ZERO
    # pull out sums raised to small positive powers and multiply them out
    expand = None
    for base, n in factors.items():
        if isinstance(base, Add) and 1 <= n <= _EXPAND_LIMIT:
            expand = (base, n)
            break
    if expand is not None:
        base, n = expand
        rest = dict(factors)
        del rest[base]
        node = _build_term(coeff, rest, exp_arg)
        return mul(node, pow_int(base, n))
    parts = []
    for base, n in factors.items():
        if n == 0:
            continue
        parts.append(base if n == 1 else Pow(base, n))
    if exp_arg is not None and not (isinstance(exp_arg, Rat) and exp_arg.value == 0):
        parts.append(Exp(exp_arg))
    parts.sort(key=sort_key)
    if not parts:
        return Rat(coeff)
    if coeff != 1:
        parts.insert(0, Rat(coeff))
    if len(parts) == 1:
        return parts[0]
    return Mul(parts)


def _terms_of(e):
    if isinstance(e, Add):
        return list(e.terms)
    if isinstance(e, Rat) and e.value == 0:
        return []
    return [e]


def _strip_coeff(term):
    """Split a non-Add canonical node into (coeff, monomial-node)."""
    if isinstance(term, Rat):
        return term.value, ONE
    if isinstance(term, Mul) and isinstance(term.factors[0], Rat):
        rest = term.factors[1:]
        mono = rest[0] if len(rest) == 1 else Mul(rest)
        return term.factors[0].value, mono
    return Fraction(1), term


def _attach_coeff(coeff, mono):
    if coeff == 0:
        return ZERO
    if mono is ONE or mono == ONE:
        return Rat(coeff)
    if coeff == 1:
        return mono
    if isinstance(mono, Mul):
        return Mul((Rat(coeff),) + mono.factors)
    return Mul((Rat(coeff), mono))


def add(a, b):
    """Canonical sum of two canonical nodes."""
    if isinstance(a, Rat) and a.value == 0:
        return b
    if isinstance(b, Rat) and b.value == 0:
        return a
    acc = {}
    order = []
    for term in _terms_of(a) + _terms_of(b):
        coeff, mono = _strip_coeff(term)
        if mono in acc:
            acc[mono] += coeff
        else:
            acc[mono] = coeff
            order.append(mono)
    terms = []
    for mono in order:
        node = _attach_coeff(acc[mono], mono)
        if not (isinstance(node, Rat) and node.value == 0):
            terms.append(node)
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    terms.sort(key=sort_key)
    return Add(terms)


def neg(a):
    return mul(MINUS_ONE, a)


def sub(a, b):
    return add(a, neg(b))


def _mul_terms(t1, t2):
    c1, f1, x1 = _split_term(t1)
    c2, f2, x2 = _split_term(t2)
    coeff = c1 * c2
    factors = dict(f1)
    for base, n in f2.items():
        m = factors.get(base, 0) + n
        if m == 0:
            factors.pop(base, None)
        else:
            factors[base] = m
    if x1 is None:
        exp_arg = x2
    elif x2 is None:
        exp_arg = x1
    else:
        exp_arg = add(x1, x2)
    return _build_term(coeff, factors, exp_arg)


def mul(a, b):
    """Canonical product; distributes over sums."""
    if isinstance(a, Rat):
        if a.value == 0:
            return ZERO
        if a.value == 1:
            return b
    if isinstance(b, Rat):
        if b.value == 0:
            return ZERO
        if b.value == 1:
            return a
    out = ZERO
    for t1 in _terms_of(a):
        for t2 in _terms_of(b):
            out = add(out, _mul_terms(t1, t2))
    return out


def pow_int(a, n):
    """Canonical integer power ``a**n`` (with ``a**0 == 1``)."""
    if not isinstance(n, int):
        raise ExpressionError("only integer powers are supported")
    if n == 0:
        return ONE
    if n == 1:
        return a
    if isinstance(a, Rat):
        if a.value == 0 and n < 0:
            raise DivisionByZero("0 raised to a negative power")
        return Rat(a.value**n)
    if isinstance(a, Sym):
        return Pow(a, n)
    if isinstance(a, Exp):
        return Exp(mul(Rat(n), a.arg))
    if isinstance(a, Pow):
        return pow_int(a.base, a.exponent * n)
    if isinstance(a, Mul):
        out = ONE
        for f in a.factors:
            out = mul(out, pow_int(f, n))
        return out
    # Add
    if 2 <= n <= _EXPAND_LIMIT:
        out = a
        for _ in range(n - 1):
            out = mul(out, a)
        return out
    return Pow(a, n)


def div(a, b):
    if isinstance(b, Rat) and b.value == 0:
        raise DivisionByZero("division by the zero constant")
    return mul(a, pow_int(b, -1))


def exp_of(a):
    if isinstance(a, Rat) and a.value == 0:
        return ONE
    return Exp(a)


def const(x):
    """Exact rational constant from an int, Fraction, or literal string."""
    return Rat(_as_fraction(x))


def sym(name):
    return Sym(name)


def simplify(e):
    """Rebuild an arbitrary tree through the canonical constructors.

    Canonical inputs come back unchanged, so the map is idempotent.
    """
    if isinstance(e, (Rat, Sym)):
        return e
    if isinstance(e, Exp):
        return exp_of(simplify(e.arg))
    if isinstance(e, Pow):
        return pow_int(simplify(e.base), e.exponent)
    if isinstance(e, Mul):
        out = ONE
        for f in e.factors:
            out = mul(out, simplify(f))
        return out
    if isinstance(e, Add):
        out = ZERO
        for t in e.terms:
            out = add(out, simplify(t))
        return out
    raise ExpressionError(f"not a scalar expression: {e!r}")


# --- differentiation -------------------------------------------------------

_diff_cache = {}


def diff(e, name):
    """Exact partial derivative with respect to the named coordinate."""
    key = (e, name)
    hit = _diff_cache.get(key)
    if hit is not None:
        return hit
    if isinstance(e, Rat):
        out = ZERO
    elif isinstance(e, Sym):
        out = ONE if e.name == name else ZERO
    elif isinstance(e, Exp):
        out = mul(e, diff(e.arg, name))
    elif isinstance(e, Pow):
        out = mul(mul(Rat(e.exponent), pow_int(e.base, e.exponent - 1)), diff(e.base, name))
    elif isinstance(e, Mul):
        out = ZERO
        fs = e.factors
        for i, f in enumerate(fs):
            df = diff(f, name)
            if isinstance(df, Rat) and df.value == 0:
                continue
            rest = df
            for j, g in enumerate(fs):
                if j != i:
                    rest = mul(rest, g)
            out = add(out, rest)
    elif isinstance(e, Add):
        out = ZERO
        for t in e.terms:
            out = add(out, diff(t, name))
    else:
        raise ExpressionError(f"not a scalar expression: {e!r}")
    _diff_cache[key] = out
    return out


# --- evaluation ------------------------------------------------------------


def contains_exp(e):
    if isinstance(e, Exp):
        return True
    if isinstance(e, Pow):
        return contains_exp(e.base)
    if isinstance(e, Mul):
        return any(contains_exp(f) for f in e.factors)
    if isinstance(e, Add):
        return any(contains_exp(t) for t in e.terms)
    return False


def free_symbols(e):
    if isinstance(e, Sym):
        return {e.name}
    if isinstance(e, Exp):
        return free_symbols(e.arg)
    if isinstance(e, Pow):
        return free_symbols(e.base)
    if isinstance(e, Mul):
        out = set()
        for f in e.factors:
            out |= free_symbols(f)
        return out
    if isinstance(e, Add):
        out = set()
        for t in e.terms:
            out |= free_symbols(t)
        return out
    return set()


def _eval(e, env, memo):
    found = memo.get(e)
    if found is not None:
        return found
    if isinstance(e, Rat):
        v = e.value
    elif isinstance(e, Sym):
        try:
            v = env[e.name]
        except KeyError:
            raise ExpressionError(f"no value supplied for coordinate {e.name!r}")
    elif isinstance(e, Exp):
        v = math.exp(float(_eval(e.arg, env, memo)))
    elif isinstance(e, Pow):
        b = _eval(e.base, env, memo)
        if b == 0 and e.exponent < 0:
            raise DivisionByZero(f"{to_str(e.base)} vanishes at the evaluation point")
        v = b**e.exponent
    elif isinstance(e, Mul):
        v = Fraction(1)
        for f in e.factors:
            v = v * _eval(f, env, memo)
    elif isinstance(e, Add):
        v = Fraction(0)
        for t in e.terms:
            v = v + _eval(t, env, memo)
    else:
        raise ExpressionError(f"not a scalar expression: {e!r}")
    memo[e] = v
    return v


def evaluate(e, env):
    """Evaluate at a point.

    ``env`` maps coordinate names to numbers.  The result is an exact
    Fraction when neither the expression nor the supplied values involve
    floats or exp; otherwise a float.
    """
    clean = {}
    for k, v in env.items():
        clean[k] = v if isinstance(v, (Fraction, float)) else _as_fraction(v)
    v = _eval(e, clean, {})
    if isinstance(v, Fraction) and v.denominator == 1:
        return v
    return v


# --- zero testing -----------------------------------------------------------


class Verdict:
    """Outcome of a zero test: proved_zero, numerically_zero, or non_zero."""

    __slots__ = ("kind", "max_abs", "witness")

    def __init__(self, kind, max_abs=0.0, witness=None):
        self.kind = kind
        self.max_abs = max_abs
        self.witness = witness  # (env, value) for non_zero

    @property
    def is_zero(self):
        return self.kind in ("proved_zero", "numerically_zero")

    def __repr__(self):
        if self.witness is not None:
            return f"Verdict({self.kind}, value={self.witness[1]!r})"
        return f"Verdict({self.kind}, max_abs={self.max_abs!r})"


PROVED_ZERO = Verdict("proved_zero")


def is_zero(e, sampler=None, tol=1e-9):
    """Decide whether a field vanishes identically on the sampling domain.

    Canonical simplification first; expressions that do not collapse to the
    zero constant are evaluated at the sampler's points and judged against
    the absolute tolerance.
    """
    e = simplify(e)
    if isinstance(e, Rat):
        if e.value == 0:
            return PROVED_ZERO
        return Verdict("non_zero", abs(float(e.value)), ({}, e.value))
    if sampler is None:
        raise ExpressionError("a sampler is required for non-constant zero tests")
    max_abs = 0.0
    used = 0
    for env in sampler.points():
        try:
            v = _eval(e, env, {})
        except DivisionByZero:
            continue
        except OverflowError:
            continue
        used += 1
        a = abs(float(v))
        if a >= tol:
            return Verdict("non_zero", a, (dict(env), v))
        if a > max_abs:
            max_abs = a
    if used == 0:
        raise InsufficientSamples("every sample point hit a singularity")
    return Verdict("numerically_zero", max_abs)


# --- sampling ----------------------------------------------------------------

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
_DENOM = 1 << 24


class Sampler:
    """Deterministic quasi-random points in a coordinate box.

    Uses an additive (Kronecker) recurrence with per-coordinate irrational
    strides; the seed only shifts the starting phase, so a fixed seed gives
    a fixed point list.  Points are dyadic rationals, which keeps exact
    evaluation available downstream.  Candidates violating a nonvanishing
    constraint by less than the margin are rejected.
    """

    def __init__(self, names, box, nonvanish=(), seed=1729, count=50, margin=1e-3):
        self.names = tuple(names)
        self.box = {n: (Fraction(str(lo)) if not isinstance(lo, (int, Fraction)) else Fraction(lo),
                        Fraction(str(hi)) if not isinstance(hi, (int, Fraction)) else Fraction(hi))
                    for n, (lo, hi) in box.items()}
        for n in self.names:
            if n not in self.box:
                self.box[n] = (Fraction(-2), Fraction(2))
        self.nonvanish = tuple(nonvanish)
        self.seed = seed
        self.count = count
        self.margin = margin
        self._points = None

    def points(self):
        if self._points is None:
            self._points = self._generate()
        return self._points

    def _generate(self):
        strides = []
        phases = []
        state = (self.seed * 6364136223846793005 + 1442695040888963407) % (1 << 63)
        for d in range(len(self.names)):
            strides.append(math.sqrt(_PRIMES[d % len(_PRIMES)]) % 1.0)
            state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 63)
            phases.append((state >> 11) / float(1 << 52))
        pts = []
        attempts = 0
        k = 0
        limit = max(200, 80 * self.count)
        while len(pts) < self.count and attempts < limit:
            attempts += 1
            env = {}
            for d, name in enumerate(self.names):
                u = (phases[d] + (k + 1) * strides[d]) % 1.0
                lo, hi = self.box[name]
                frac = Fraction(round(u * _DENOM), _DENOM)
                env[name] = lo + (hi - lo) * frac
            k += 1
            ok = True
            for g in self.nonvanish:
                try:
                    val = _eval(g, env, {})
                except DivisionByZero:
                    ok = False
                    break
                if abs(float(val)) < self.margin:
                    ok = False
                    break
            if ok:
                pts.append(env)
        if len(pts) < self.count:
            raise InsufficientSamples(
                f"only {len(pts)} of {self.count} sample points satisfy the domain constraints"
            )
        return pts


# --- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[()+\-*/^]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", f"column {col + 1}")
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            op = m.group("op")
            tokens.append(("op", "^" if op == "**" else op, m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def _peek(self):
        return self.tokens[self.i]

    def _next(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def _fail(self, message, tok=None):
        tok = tok or self._peek()
        raise ParseError(message, f"column {tok[2] + 1}")

    def parse(self):
        e = self._expr()
        kind, val, _ = self._peek()
        if kind != "end":
            self._fail(f"unexpected {val!r} after expression")
        return e

    def _expr(self):
        e = self._term()
        while True:
            kind, val, _ = self._peek()
            if kind == "op" and val in "+-":
                self._next()
                rhs = self._term()
                e = add(e, rhs) if val == "+" else sub(e, rhs)
            else:
                return e

    def _term(self):
        e = self._unary()
        while True:
            kind, val, _ = self._peek()
            if kind == "op" and val in "*/":
                self._next()
                rhs = self._unary()
                e = mul(e, rhs) if val == "*" else div(e, rhs)
            else:
                return e

    def _unary(self):
        kind, val, _ = self._peek()
        if kind == "op" and val == "-":
            self._next()
            return neg(self._unary())
        if kind == "op" and val == "+":
            self._next()
            return self._unary()
        return self._power()

    def _power(self):
        base = self._primary()
        kind, val, _ = self._peek()
        if kind == "op" and val == "^":
            tok = self._next()
            exponent = self._unary()
            if not isinstance(exponent, Rat) or exponent.value.denominator != 1:
                self._fail("exponent must be an integer constant", tok)
            return pow_int(base, int(exponent.value))
        return base

    def _primary(self):
        kind, val, tok_pos = self._next()
        if kind == "num":
            return Rat(Fraction(val) if "." not in val else Fraction(val))
        if kind == "ident":
            nk, nv, _ = self._peek()
            if nk == "op" and nv == "(":
                if val != "exp":
                    raise ParseError(
                        f"unknown function {val!r} (only exp is available)",
                        f"column {tok_pos + 1}",
                    )
                self._next()
                arg = self._expr()
                ck, cv, _ = self._peek()
                if not (ck == "op" and cv == ")"):
                    self._fail("expected ')'")
                self._next()
                return exp_of(arg)
            return Sym(val)
        if kind == "op" and val == "(":
            e = self._expr()
            ck, cv, _ = self._peek()
            if not (ck == "op" and cv == ")"):
                self._fail("expected ')'")
            self._next()
            return e
        raise ParseError("expected a number, coordinate, or '('", f"column {tok_pos + 1}")


def parse(text):
    """Parse expression text into a canonical ScalarField."""
    if not isinstance(text, str):
        raise ParseError(f"expression must be a string, got {type(text).__name__}")
    if not text.strip():
        raise ParseError("empty expression")
    return _Parser(text).parse()


# --- rendering ---------------------------------------------------------------


def _render_factor(f):
    if isinstance(f, (Sym, Exp)):
        return _render(f)
    if isinstance(f, Pow):
        base = _render(f.base)
        if isinstance(f.base, Add):
            base = f"({base})"
        if f.exponent < 0:
            return f"{base}^(-{-f.exponent})"
        return f"{base}^{f.exponent}"
    if isinstance(f, Rat):
        return _render(f)
    return f"({_render(f)})"


def _render(e):
    if isinstance(e, Rat):
        v = e.value
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Exp):
        return f"exp({_render(e.arg)})"
    if isinstance(e, Pow):
        return _render_factor(e)
    if isinstance(e, Mul):
        coeff = Fraction(1)
        rest = list(e.factors)
        if isinstance(rest[0], Rat):
            coeff = rest[0].value
            rest = rest[1:]
        body = "*".join(_render_factor(f) for f in rest)
        if coeff == 1:
            return body
        if coeff == -1:
            return f"-{body}"
        cnum = f"{coeff.numerator}" if coeff.denominator == 1 else f"{coeff.numerator}/{coeff.denominator}"
        return f"{cnum}*{body}"
    if isinstance(e, Add):
        parts = []
        for i, t in enumerate(e.terms):
            s = _render(t)
            if i == 0:
                parts.append(s)
            elif s.startswith("-"):
                parts.append(f" - {s[1:]}")
            else:
                parts.append(f" + {s}")
        return "".join(parts)
    raise ExpressionError(f"not a scalar expression: {e!r}")


def to_str(e):
    """Render a canonical field as grammar-compatible text."""
    return _render(e)
