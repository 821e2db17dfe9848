"""JSON manifests describing a frame manifold.

A manifest holds expression strings; everything numeric-looking is kept
exact (Fractions) so fixture answers survive round-trips. Field errors
raise ParseError with the offending JSON path in ``where``.
"""

from __future__ import annotations

import hashlib
import json
import os
from fractions import Fraction

try:
    from importlib import resources
except ImportError:  # pragma: no cover
    resources = None

from . import scalar
from .errors import ParseError
from .geometry import ManifoldSpec, VectorField

REQUIRED_FIELDS = ("coordinates", "frame", "metric_frame", "phi_frame", "xi")
OPTIONAL_FIELDS = ("name", "domain", "potential", "constants",
                   "seed", "samples", "tol")

DEFAULT_SEED = 1729
DEFAULT_SAMPLES = 50
DEFAULT_TOL = 1e-9


def _expect(cond, message, where):
    if not cond:
        raise ParseError(message, where=where)


def _parse_expr(text, where):
    _expect(isinstance(text, (str, int, float)), "expected an expression string", where)
    if isinstance(text, (int, float)):
        text = repr(text)
    try:
        return scalar.parse(text)
    except ParseError as ex:
        raise ParseError(f"{ex.args[0]}", where=f"{where}: {text!r}")


def _parse_matrix(raw, dim, where):
    _expect(isinstance(raw, list) and len(raw) == dim,
            f"expected {dim} rows", where)
    out = []
    for i, row in enumerate(raw):
        _expect(isinstance(row, list) and len(row) == dim,
                f"expected {dim} entries", f"{where}[{i}]")
        out.append([_parse_expr(e, f"{where}[{i}][{j}]")
                    for j, e in enumerate(row)])
    return out


def _parse_number(raw, where):
    if isinstance(raw, bool):
        raise ParseError("expected a number", where=where)
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        return Fraction(raw).limit_denominator(10 ** 12)
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational number: {raw!r}", where=where)
    raise ParseError("expected a number", where=where)


class Manifest:
    """Parsed manifest plus the source bytes' hash."""

    def __init__(self, data, path=None, raw=None):
        if not isinstance(data, dict):
            raise ParseError("manifest must be a JSON object", where="$")
        unknown = set(data) - set(REQUIRED_FIELDS) - set(OPTIONAL_FIELDS)
        _expect(not unknown, f"unknown fields: {sorted(unknown)}", "$")
        for f in REQUIRED_FIELDS:
            _expect(f in data, f"missing required field {f!r}", "$")

        coords = data["coordinates"]
        _expect(isinstance(coords, list) and coords
                and all(isinstance(c, str) and c.isidentifier() for c in coords),
                "coordinates must be a list of identifiers", "coordinates")
        _expect(len(set(coords)) == len(coords),
                "coordinates must be distinct", "coordinates")
        self.coordinates = tuple(coords)
        dim = len(coords)

        self.path = path
        self.sha256 = hashlib.sha256(raw).hexdigest() if raw is not None else None
        default_name = os.path.splitext(os.path.basename(path))[0] if path else "manifold"
        name = data.get("name", default_name)
        _expect(isinstance(name, str) and name, "name must be a nonempty string", "name")
        self.name = name

        self.frame = _parse_matrix(data["frame"], dim, "frame")
        self.metric_frame = _parse_matrix(data["metric_frame"], dim, "metric_frame")
        self.phi_frame = _parse_matrix(data["phi_frame"], dim, "phi_frame")

        xi = data["xi"]
        if isinstance(xi, bool):
            raise ParseError("xi must be a frame index or component list", where="xi")
        if isinstance(xi, int):
            _expect(0 <= xi < dim, f"xi index {xi} out of range for dim {dim}", "xi")
            self.xi = xi
        elif isinstance(xi, list):
            _expect(len(xi) == dim, f"xi needs {dim} components", "xi")
            self.xi = [_parse_expr(e, f"xi[{k}]") for k, e in enumerate(xi)]
        else:
            raise ParseError("xi must be a frame index or component list", where="xi")

        self.box = {}
        self.nonvanish = []
        domain = data.get("domain", [])
        _expect(isinstance(domain, list), "domain must be a list", "domain")
        for k, entry in enumerate(domain):
            where = f"domain[{k}]"
            _expect(isinstance(entry, dict), "domain entries are objects", where)
            if "nonzero" in entry:
                _expect(set(entry) == {"nonzero"}, "nonzero entries carry only that key", where)
                self.nonvanish.append(_parse_expr(entry["nonzero"], f"{where}.nonzero"))
            else:
                _expect(set(entry) == {"coord", "min", "max"},
                        "interval entries need coord/min/max", where)
                c = entry["coord"]
                _expect(c in self.coordinates, f"unknown coordinate {c!r}", where)
                lo = _parse_number(entry["min"], f"{where}.min")
                hi = _parse_number(entry["max"], f"{where}.max")
                _expect(lo < hi, "empty interval", where)
                self.box[c] = (lo, hi)

        self.potential_vector = None
        self.potential_function = None
        pot = data.get("potential")
        if pot is not None:
            _expect(isinstance(pot, dict) and len(pot) == 1
                    and next(iter(pot)) in ("vector", "function"),
                    "potential is {vector: [...]} or {function: expr}", "potential")
            if "vector" in pot:
                comps = pot["vector"]
                _expect(isinstance(comps, list) and len(comps) == dim,
                        f"potential vector needs {dim} components", "potential.vector")
                self.potential_vector = [_parse_expr(e, f"potential.vector[{k}]")
                                         for k, e in enumerate(comps)]
            else:
                self.potential_function = _parse_expr(pot["function"], "potential.function")

        self.constants = {}
        cons = data.get("constants")
        if cons is not None:
            _expect(isinstance(cons, dict) and set(cons) <= {"lambda_tilde", "mu"},
                    "constants holds lambda_tilde and/or mu", "constants")
            for key, val in cons.items():
                self.constants[key] = _parse_number(val, f"constants.{key}")

        seed = data.get("seed", DEFAULT_SEED)
        _expect(isinstance(seed, int) and not isinstance(seed, bool) and seed >= 0,
                "seed must be a nonnegative integer", "seed")
        self.seed = seed
        samples = data.get("samples", DEFAULT_SAMPLES)
        _expect(isinstance(samples, int) and not isinstance(samples, bool)
                and samples > 0, "samples must be a positive integer", "samples")
        self.samples = samples
        tol = data.get("tol", DEFAULT_TOL)
        _expect(isinstance(tol, (int, float)) and not isinstance(tol, bool)
                and 0 < float(tol) < 1, "tol must be in (0, 1)", "tol")
        self.tol = float(tol)

    def manifold(self, seed=None, samples=None, tol=None):
        """Build the validated ManifoldSpec, with optional overrides."""
        xi = self.xi
        if isinstance(xi, list):
            xi = VectorField(self.coordinates, xi)
        return ManifoldSpec(
            name=self.name,
            coords=self.coordinates,
            frame=self.frame,
            metric=self.metric_frame,
            phi=self.phi_frame,
            xi=xi,
            box=self.box,
            nonvanish=tuple(self.nonvanish),
            seed=self.seed if seed is None else seed,
            samples=self.samples if samples is None else samples,
            tol=self.tol if tol is None else tol,
        )

    def potential_field(self):
        """The vector potential as a VectorField, or None."""
        if self.potential_vector is None:
            return None
        return VectorField(self.coordinates, self.potential_vector)


def loads(text, path=None):
    raw = text.encode("utf-8") if isinstance(text, str) else text
    try:
        data = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as ex:
        raise ParseError(f"manifest is not UTF-8: {ex}", where=path or "<string>")
    except json.JSONDecodeError as ex:
        raise ParseError(f"invalid JSON: {ex.msg}",
                         where=f"{path or '<string>'}:{ex.lineno}:{ex.colno}")
    return Manifest(data, path=path, raw=raw)


def load(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as ex:
        raise ParseError(f"cannot read manifest: {ex}", where=str(path))
    return loads(raw, path=str(path))


def fixture_names():
    pkg = resources.files("contactgeo") / "fixtures"
    return sorted(p.name[:-5] for p in pkg.iterdir() if p.name.endswith(".json"))


def resolve(arg):
    """A filesystem path, or a bundled fixture name like ``example2``."""
    if os.path.exists(arg):
        return load(arg)
    base = arg[:-5] if arg.endswith(".json") else arg
    if base.isidentifier():
        pkg = resources.files("contactgeo") / "fixtures" / f"{base}.json"
        if pkg.is_file():
            return loads(pkg.read_bytes(), path=f"{base}.json")
    raise ParseError(
        f"no such manifest file or fixture: {arg!r} "
        f"(bundled: {', '.join(fixture_names())})",
        where=arg,
    )
