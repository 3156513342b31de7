import numpy as np
import pytest
from hypothesis import given, strategies as st

from pointspec import kernels
from pointspec.kernels import get_backend

try:
    compiled = get_backend("compiled")
except ImportError:
    compiled = None

python = get_backend("python")
needs_ext = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def test_backend_flag():
    assert kernels.BACKEND in ("compiled", "python")
    with pytest.raises(ValueError):
        get_backend("fortran")


@needs_ext
@given(st.integers(0, 2**32 - 1), st.integers(1, 12))
def test_parity(seed, n):
    rng = np.random.default_rng(seed)
    y = rng.normal(size=(n, 3))
    d = python.pair_distances(y)
    np.testing.assert_allclose(compiled.pair_distances(y), d, rtol=1e-15, atol=0)
    a = rng.normal(size=n)
    zs = rng.normal(size=7) + 1j * rng.uniform(-1, 2, size=7)
    np.testing.assert_allclose(compiled.gamma_batch(d, a, zs), python.gamma_batch(d, a, zs), rtol=1e-13, atol=1e-15)
    lams = rng.uniform(0, 5, size=5)
    np.testing.assert_allclose(compiled.gamma_imag(d, a, lams), python.gamma_imag(d, a, lams), rtol=1e-13, atol=1e-15)
    v = rng.normal(size=n)
    assert compiled.distance_form(d, v) == pytest.approx(python.distance_form(d, v), rel=1e-12, abs=1e-14)
    v -= v.mean()
    t = rng.normal(size=n)
    assert compiled.gap_form(t, v) == pytest.approx(python.gap_form(t, v), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("mod", [python] + ([compiled] if compiled else []))
def test_accepts_read_only_inputs(mod):
    y = np.arange(9.0).reshape(3, 3)
    y.setflags(write=False)
    d = mod.pair_distances(y)
    assert d[0, 1] == pytest.approx(np.sqrt(27.0))


@pytest.mark.parametrize("mod", [python] + ([compiled] if compiled else []))
def test_gamma_imag_matches_gamma_batch(mod):
    rng = np.random.default_rng(3)
    d = python.pair_distances(rng.normal(size=(5, 3)))
    a = rng.normal(size=5)
    lam = np.array([0.0, 0.7, 3.0])
    np.testing.assert_allclose(mod.gamma_imag(d, a, lam), mod.gamma_batch(d, a, 1j * lam).real, atol=1e-15)
    assert np.abs(mod.gamma_batch(d, a, 1j * lam).imag).max() < 1e-15


def test_pure_fallback_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, POINTSPEC_PURE="1")
    code = "from pointspec import kernels, registry_get, classify_zero_energy as c; " \
           "print(kernels.BACKEND, c(registry_get('tetrahedron')).e)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "3"]
