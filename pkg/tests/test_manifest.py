"""Manifest parsing, validation errors, and fixture resolution."""

import json
from fractions import Fraction

import pytest

from contactgeo import manifest
from contactgeo.errors import ParseError
from contactgeo.manifest import (
    DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOL, Manifest, fixture_names,
    load, loads, resolve,
)


def base_data(**over):
    data = {
        "coordinates": ["x", "y", "z"],
        "frame": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        "metric_frame": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        "phi_frame": [["0", "1", "0"], ["-1", "0", "0"], ["0", "0", "0"]],
        "xi": 2,
    }
    data.update(over)
    return data


def parse_data(**over):
    return Manifest(base_data(**over))


def expect_error(match, **over):
    with pytest.raises(ParseError, match=match):
        parse_data(**over)


# --- happy paths -------------------------------------------------------------


def test_bundled_fixtures_all_parse():
    names = fixture_names()
    assert names == ["eta_einstein", "example1", "example2", "example3", "flat"]
    for name in names:
        m = resolve(name)
        M = m.manifold()
        assert M.dim == len(m.coordinates)


def test_defaults():
    m = parse_data()
    assert m.name == "manifold"
    assert m.seed == DEFAULT_SEED
    assert m.samples == DEFAULT_SAMPLES
    assert m.tol == DEFAULT_TOL
    assert m.box == {}
    assert m.nonvanish == []
    assert m.constants == {}
    assert m.potential_vector is None
    assert m.potential_function is None
    assert m.potential_field() is None
    assert m.sha256 is None


def test_domain_and_constants():
    m = parse_data(
        domain=[{"coord": "x", "min": -2, "max": 2},
                {"coord": "z", "min": "1/2", "max": 1.5},
                {"nonzero": "y"}],
        constants={"lambda_tilde": "-4", "mu": 4},
    )
    assert m.box["x"] == (Fraction(-2), Fraction(2))
    assert m.box["z"] == (Fraction(1, 2), Fraction(3, 2))
    assert len(m.nonvanish) == 1
    assert m.constants == {"lambda_tilde": Fraction(-4), "mu": Fraction(4)}


def test_vector_potential():
    m = parse_data(potential={"vector": ["y", "0", "1"]})
    V = m.potential_field()
    assert V is not None
    assert m.potential_function is None


def test_function_potential():
    m = parse_data(potential={"function": "x^2 + z"})
    assert m.potential_vector is None
    assert m.potential_field() is None
    assert m.potential_function is not None


def test_xi_component_list():
    m = parse_data(xi=["0", "0", "1"])
    M = m.manifold()
    assert [str(c) for c in M.xi_frame] == ["0", "0", "1"]


def test_manifold_overrides():
    m = parse_data(seed=5, samples=7, tol=0.5)
    M = m.manifold()
    assert (M.seed, M.samples, M.tol) == (5, 7, 0.5)
    M2 = m.manifold(seed=9, samples=11, tol=0.25)
    assert (M2.seed, M2.samples, M2.tol) == (9, 11, 0.25)


def test_sha256_tracks_source_bytes():
    text = json.dumps(base_data())
    a = loads(text)
    b = loads(text)
    assert a.sha256 == b.sha256
    c = loads(json.dumps(base_data(seed=7)))
    assert c.sha256 != a.sha256


def test_load_from_file(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(json.dumps(base_data(name="disk")))
    m = load(p)
    assert m.name == "disk"
    assert m.path == str(p)
    assert resolve(str(p)).name == "disk"


def test_name_defaults_to_file_stem(tmp_path):
    p = tmp_path / "rotor.json"
    p.write_text(json.dumps(base_data()))
    assert load(p).name == "rotor"


# --- validation errors -------------------------------------------------------


def test_missing_required_field():
    data = base_data()
    del data["phi_frame"]
    with pytest.raises(ParseError, match="missing required field 'phi_frame'"):
        Manifest(data)


def test_unknown_field_rejected():
    expect_error("unknown fields", extra=1)


def test_top_level_must_be_object():
    with pytest.raises(ParseError, match="JSON object"):
        Manifest([1, 2])


def test_bad_coordinates():
    expect_error("identifiers", coordinates=["x", "2y", "z"])
    expect_error("distinct", coordinates=["x", "x", "z"])


def test_bad_matrix_shapes():
    expect_error("expected 3 rows", frame=[["1", "0", "0"]])
    expect_error("expected 3 entries",
                 metric_frame=[["1", "0"], ["0", "1", "0"], ["0", "0", "1"]])


def test_bad_expression_reports_path():
    with pytest.raises(ParseError, match=r"frame\[0\]\[1\]"):
        parse_data(frame=[["1", "x +", "0"], ["0", "1", "0"], ["0", "0", "1"]])


def test_bad_xi():
    expect_error("out of range", xi=3)
    expect_error("out of range", xi=-1)
    expect_error("frame index or component list", xi="e3")
    expect_error("frame index or component list", xi=True)
    expect_error("3 components", xi=["0", "1"])


def test_bad_domain():
    expect_error("domain must be a list", domain={"coord": "x"})
    expect_error("coord/min/max", domain=[{"coord": "x", "min": 0}])
    expect_error("unknown coordinate", domain=[{"coord": "w", "min": 0, "max": 1}])
    expect_error("empty interval", domain=[{"coord": "x", "min": 1, "max": 1}])
    expect_error("only that key", domain=[{"nonzero": "y", "coord": "x"}])
    expect_error("not a rational number",
                 domain=[{"coord": "x", "min": "lo", "max": 1}])


def test_bad_potential():
    expect_error("vector.*or.*function", potential={})
    expect_error("vector.*or.*function",
                 potential={"vector": ["0"] * 3, "function": "x"})
    expect_error("3 components", potential={"vector": ["0", "0"]})


def test_bad_constants():
    expect_error("lambda_tilde and/or mu", constants={"kappa": 1})
    expect_error("expected a number", constants={"mu": True})
    expect_error("not a rational number", constants={"mu": "two"})


def test_bad_sampling_settings():
    expect_error("seed", seed=-1)
    expect_error("seed", seed=True)
    expect_error("samples", samples=0)
    expect_error("tol", tol=0)
    expect_error("tol", tol=2.0)
    expect_error("tol", tol=True)


def test_json_error_carries_position():
    with pytest.raises(ParseError) as err:
        loads('{\n  "coordinates": [,]\n}', path="m.json")
    assert "m.json:2" in str(err.value)


def test_resolve_unknown_lists_fixtures():
    with pytest.raises(ParseError, match="bundled: .*example2"):
        resolve("nosuch")


def test_resolve_accepts_json_suffix():
    assert resolve("example2.json").name == manifest.resolve("example2").name
