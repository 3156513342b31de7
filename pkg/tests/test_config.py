import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pointspec.config import (
    DEFAULT_PARAMS,
    REGISTRY,
    Configuration,
    from_dict,
    load,
    parse_spec,
    registry_defaults,
    registry_get,
    save,
    spindle_centers,
    validate,
)
from pointspec.errors import (
    BadParameterCount,
    DuplicateCenters,
    EmptyConfiguration,
    IOFailure,
    NonFiniteEntry,
    ParseFailure,
    UnknownName,
    ValidationFailure,
)

from conftest import random_config


def test_arrays_are_read_only():
    c = registry_get("tetrahedron")
    with pytest.raises(ValueError):
        c.centers[0, 0] = 1.0
    with pytest.raises(ValueError):
        c.alphas[0] = 1.0


def test_equality_and_hash():
    a = registry_get("two_center", [2.0])
    b = registry_get("two_center", [2.0])
    assert a == b and hash(a) == hash(b)
    assert a != registry_get("two_center", [2.5])


@pytest.mark.parametrize(
    "centers, alphas, exc",
    [
        (np.zeros((0, 3)), [], EmptyConfiguration),
        ([[0, 0, 0], [0, 0, 0]], [1, 1], DuplicateCenters),
        ([[0, 0, 0], [0, 0, 5e-10]], [1, 1], DuplicateCenters),
        ([[0, 0, 0]], [np.nan], NonFiniteEntry),
        ([[0, 0, np.inf]], [1.0], NonFiniteEntry),
        ([[0, 0, 0], [1, 0, 0]], [1.0], ValidationFailure),
        ([[0, 0]], [1.0], ValidationFailure),
    ],
)
def test_validate_rejects(centers, alphas, exc):
    with pytest.raises(exc):
        validate(Configuration(np.asarray(centers, dtype=float), alphas))


def test_separation_floor_is_inclusive_above():
    validate(Configuration([[0, 0, 0], [0, 0, 2e-9]], [1, 1]))


@given(st.integers(0, 10_000), st.integers(1, 7))
def test_json_roundtrip(tmp_path_factory, seed, n):
    cfg = random_config(seed, n)
    path = tmp_path_factory.mktemp("cfg") / "c.json"
    save(cfg, path)
    assert load(path) == cfg


def test_load_errors(tmp_path):
    with pytest.raises(IOFailure):
        load(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseFailure):
        load(bad)
    for payload in (
        [],
        {"centers": [[0, 0, 0]]},
        {"centers": [[0, 0]], "alphas": [1]},
        {"centers": [[0, 0, 0]], "alphas": [1, 2]},
        {"centers": [[0, 0, 0]], "alphas": ["x"]},
        {"centers": [[0, 0, True]], "alphas": [1]},
        {"centers": [[0, 0, 0]], "alphas": [1], "label": 3},
    ):
        with pytest.raises(ParseFailure):
            from_dict(payload)


def test_registry_geometry():
    d = registry_get("equilateral_triangle", [2.0]).distances()
    off = d[~np.eye(3, dtype=bool)]
    np.testing.assert_allclose(off, 2.0, rtol=1e-15)
    d = registry_get("tetrahedron", [1.5]).distances()
    np.testing.assert_allclose(d[~np.eye(4, dtype=bool)], 1.5, rtol=1e-15)
    c = registry_get("two_center", [3.0])
    np.testing.assert_allclose(c.alphas, -1 / (12 * math.pi))


def test_registry_alpha_override():
    c = registry_get("two_center", [1.0, -1.0, -2.0])
    np.testing.assert_array_equal(c.alphas, [-1.0, -2.0])
    with pytest.raises(BadParameterCount):
        registry_get("two_center", [1.0, -1.0])
    with pytest.raises(BadParameterCount):
        registry_get("single", [])
    with pytest.raises(BadParameterCount):
        registry_get("moser_spindle", [1.0, 2.0])


def test_registry_unknown():
    with pytest.raises(UnknownName):
        registry_get("hexagon")


def test_registry_defaults_cover_everything():
    cfgs = registry_defaults()
    assert len(cfgs) == len(REGISTRY) == len(DEFAULT_PARAMS)


def test_parse_spec(tmp_path):
    assert parse_spec("two_center") == registry_get("two_center", [1.0])
    assert parse_spec("single:-1").alphas[0] == -1.0
    with pytest.raises(ParseFailure):
        parse_spec("two_center:a,b")
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"centers": [[0, 0, 0]], "alphas": [0.5]}))
    assert parse_spec(str(p)).alphas[0] == 0.5


def _chromatic_number(adj, limit=6):
    n = len(adj)
    order = sorted(range(n), key=lambda v: -len(adj[v]))

    def colourable(k):
        colour = [-1] * n

        def place(i):
            if i == n:
                return True
            v = order[i]
            used = {colour[u] for u in adj[v]}
            for c in range(k):
                if c not in used:
                    colour[v] = c
                    if place(i + 1):
                        return True
            colour[v] = -1
            return False

        return place(0)

    return next(k for k in range(1, limit + 1) if colourable(k))


def test_spindle_is_unit_distance_and_five_chromatic():
    y = spindle_centers()
    assert y.shape == (14, 3)
    d = np.linalg.norm(y[:, None] - y[None], axis=-1)
    unit = np.isclose(d, 1.0, atol=1e-12) & ~np.eye(14, dtype=bool)
    adj = [set(np.flatnonzero(row)) for row in unit]
    assert unit.sum() // 2 >= 25
    assert _chromatic_number(adj) == 5
    assert d[~np.eye(14, dtype=bool)].min() > 0.1
