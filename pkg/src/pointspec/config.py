"""Interaction configurations: validation, JSON persistence and named geometries."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

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
from pointspec.kernels import pair_distances

#: Configurations with two centers closer than this are rejected.
SEPARATION_FLOOR = 1e-9

FOUR_PI = 4.0 * math.pi


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Configuration:
    """N point interactions: centers in R^3 and real coupling constants.

    Arrays are stored read-only; use :func:`validate` (or :meth:`create`) to
    check the invariants.
    """

    centers: np.ndarray
    alphas: np.ndarray
    label: str | None = None

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=np.float64)
        if centers.ndim == 1 and centers.size == 0:
            centers = centers.reshape(0, 3)
        object.__setattr__(self, "centers", _frozen(centers))
        object.__setattr__(self, "alphas", _frozen(np.asarray(self.alphas, dtype=np.float64).reshape(-1)))

    @classmethod
    def create(cls, centers, alphas, label: str | None = None) -> "Configuration":
        return validate(cls(centers, alphas, label))

    @property
    def n(self) -> int:
        return int(self.alphas.shape[0])

    def distances(self) -> np.ndarray:
        return pair_distances(self.centers)

    def with_alphas(self, alphas) -> "Configuration":
        return Configuration(self.centers, alphas, self.label)

    def scaled(self, s: float) -> "Configuration":
        """Centers multiplied by ``s`` and couplings divided by ``s``."""
        return Configuration(self.centers * s, self.alphas / s, self.label)

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return (
            self.label == other.label
            and np.array_equal(self.centers, other.centers)
            and np.array_equal(self.alphas, other.alphas)
        )

    def __hash__(self):
        return hash((self.centers.tobytes(), self.alphas.tobytes(), self.label))

    def __repr__(self):
        return f"Configuration(n={self.n}, label={self.label!r})"

    def to_dict(self) -> dict:
        d = {
            "centers": [[float(x) for x in c] for c in self.centers],
            "alphas": [float(a) for a in self.alphas],
        }
        if self.label is not None:
            d["label"] = self.label
        return d


def validate(config: Configuration) -> Configuration:
    centers, alphas = config.centers, config.alphas
    if alphas.size == 0 or centers.shape[0] == 0:
        raise EmptyConfiguration("a configuration needs at least one center")
    if centers.ndim != 2 or centers.shape[1] != 3:
        raise ValidationFailure(f"centers must have shape (N, 3), got {centers.shape}")
    if centers.shape[0] != alphas.shape[0]:
        raise ValidationFailure(
            f"{centers.shape[0]} centers but {alphas.shape[0]} coupling constants"
        )
    if not (np.all(np.isfinite(centers)) and np.all(np.isfinite(alphas))):
        raise NonFiniteEntry("centers and alphas must be finite")
    n = alphas.shape[0]
    if n > 1:
        d = pair_distances(centers)
        d[np.diag_indices(n)] = np.inf
        j, k = np.unravel_index(np.argmin(d), d.shape)
        if d[j, k] < SEPARATION_FLOOR:
            raise DuplicateCenters(
                f"centers {j} and {k} are {d[j, k]:.3g} apart (floor {SEPARATION_FLOOR:g})"
            )
    return config


# persistence


def save(config: Configuration, path) -> None:
    text = json.dumps(config.to_dict(), indent=2)
    try:
        Path(path).write_text(text + "\n", encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


def from_dict(data) -> Configuration:
    """Build and validate a configuration from decoded JSON."""
    if not isinstance(data, dict):
        raise ParseFailure("configuration must be a JSON object")
    try:
        centers = data["centers"]
        alphas = data["alphas"]
    except KeyError as exc:
        raise ParseFailure(f"missing key {exc.args[0]!r}") from None
    label = data.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseFailure("label must be a string")
    if not isinstance(centers, list) or not isinstance(alphas, list):
        raise ParseFailure("centers and alphas must be lists")
    for c in centers:
        if not isinstance(c, list) or len(c) != 3 or not all(_is_number(x) for x in c):
            raise ParseFailure(f"center {c!r} is not a list of three numbers")
    if not all(_is_number(a) for a in alphas):
        raise ParseFailure("alphas must be numbers")
    if len(centers) != len(alphas):
        raise ParseFailure(f"{len(centers)} centers but {len(alphas)} alphas")
    cfg = Configuration(np.array(centers, dtype=np.float64).reshape(-1, 3), alphas, label)
    return validate(cfg)


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def load(path) -> Configuration:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseFailure(f"{path}: {exc}") from exc
    return from_dict(data)


# registry


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    parameters: tuple[str, ...]
    generator: Callable[[Sequence[float]], Configuration]
    description: str

    def __call__(self, params: Sequence[float] = ()) -> Configuration:
        return validate(self.generator(list(params)))


def _split(params, name: str, n: int, geometric: int = 1) -> tuple[list[float], list[float] | None]:
    """Split ``params`` into geometric parameters and an optional alpha override."""
    if len(params) == geometric:
        return list(params), None
    if len(params) == geometric + n:
        return list(params[:geometric]), list(params[geometric:])
    raise BadParameterCount(
        f"{name} takes {geometric} parameter(s), optionally followed by {n} alphas; "
        f"got {len(params)}"
    )


def _uniform_alpha(centers: np.ndarray) -> float:
    # -1/(4 pi d) with d the realized edge length, so Gamma_0 is singular to the last bit
    return -1.0 / (FOUR_PI * float(pair_distances(centers)[0, 1]))


def _single(params):
    if len(params) != 1:
        raise BadParameterCount(f"single takes 1 parameter (alpha), got {len(params)}")
    return Configuration(np.zeros((1, 3)), [params[0]], f"single({params[0]:g})")


def _two_center(params):
    (d,), alphas = _split(params, "two_center", 2)
    centers = np.array([[0.0, 0.0, 0.0], [d, 0.0, 0.0]])
    if alphas is None:
        alphas = [-1.0 / (FOUR_PI * d)] * 2
    return Configuration(centers, alphas, f"two_center({d:g})")


def _triangle(params):
    (s,), alphas = _split(params, "equilateral_triangle", 3)
    # permutations of (1, 0, 0) give bitwise-equal edge lengths
    centers = np.eye(3) * (s / math.sqrt(2.0))
    if alphas is None:
        alphas = [_uniform_alpha(centers)] * 3
    return Configuration(centers, alphas, f"equilateral_triangle({s:g})")


def _tetrahedron(params):
    (s,), alphas = _split(params, "tetrahedron", 4)
    base = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=np.float64)
    centers = base * (s / (2.0 * math.sqrt(2.0)))
    if alphas is None:
        alphas = [_uniform_alpha(centers)] * 4
    return Configuration(centers, alphas, f"tetrahedron({s:g})")


def spindle_centers() -> np.ndarray:
    """14-point unit-distance spindle in R^3.

    An apex A carries three bipyramids (two regular unit tetrahedra glued along a
    face); their far tips E1, E2, E3 lie at distance 2*sqrt(2/3) from A and form a
    unit equilateral triangle. In any 4-colouring each tip shares the colour of A,
    so the unit-distance graph needs 5 colours. The 14th point completes a regular
    tetrahedron on the tip triangle, away from A.
    """
    h = 2.0 * math.sqrt(2.0 / 3.0)
    rho = 1.0 / math.sqrt(3.0)
    # tip triangle: circumradius rho, centred on the z axis at height sqrt(h^2 - rho^2)
    tip_z = math.sqrt(h * h - rho * rho)
    pts = [np.zeros(3)]
    tips = []
    for i in range(3):
        phi = 2.0 * math.pi * i / 3.0
        tip = np.array([rho * math.cos(phi), rho * math.sin(phi), tip_z])
        tips.append(tip)
        u = tip / h
        # orthonormal frame around the arm axis u
        ref = np.array([1.0, 0.0, 0.0]) if abs(u[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = np.cross(u, ref)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(u, e1)
        mid = 0.5 * h * u
        twist = 2.0 * math.pi * i / 9.0 + 0.3
        for m in range(3):
            t = twist + 2.0 * math.pi * m / 3.0
            pts.append(mid + rho * (math.cos(t) * e1 + math.sin(t) * e2))
        pts.append(tip)
    apex = np.array([0.0, 0.0, tip_z + math.sqrt(2.0 / 3.0)])
    pts.append(apex)
    return np.array(pts)


def _spindle(params):
    n = 14
    if len(params) == 0:
        alphas = [-1.0 / FOUR_PI] * n
    elif len(params) == 1:
        alphas = [params[0]] * n
    elif len(params) == n:
        alphas = list(params)
    else:
        raise BadParameterCount(f"moser_spindle takes 0, 1 or 14 alphas, got {len(params)}")
    return Configuration(spindle_centers(), alphas, "moser_spindle")


REGISTRY: dict[str, RegistryEntry] = {
    e.name: e
    for e in [
        RegistryEntry("single", ("alpha",), _single, "one center at the origin"),
        RegistryEntry(
            "two_center", ("d",), _two_center,
            "two centers a distance d apart; alphas default to -1/(4 pi d)",
        ),
        RegistryEntry(
            "equilateral_triangle", ("s",), _triangle,
            "vertices of an equilateral triangle of side s; alphas default to -1/(4 pi s)",
        ),
        RegistryEntry(
            "tetrahedron", ("s",), _tetrahedron,
            "vertices of a regular tetrahedron of side s; alphas default to -1/(4 pi s)",
        ),
        RegistryEntry(
            "moser_spindle", (), _spindle,
            "14-point unit-distance spindle; alphas default to -1/(4 pi), no zero mode claimed",
        ),
    ]
}

#: Parameters used when a registry entry is named without any.
DEFAULT_PARAMS: dict[str, tuple[float, ...]] = {
    "single": (0.0,),
    "two_center": (1.0,),
    "equilateral_triangle": (1.0,),
    "tetrahedron": (1.0,),
    "moser_spindle": (),
}


def registry_get(name: str, params: Sequence[float] | None = None) -> Configuration:
    """Build a registry entry; ``params=None`` means its defaults."""
    if params is None:
        params = DEFAULT_PARAMS.get(name, ())
    try:
        entry = REGISTRY[name]
    except KeyError:
        raise UnknownName(f"no registry entry named {name!r}") from None
    return entry(params)


def registry_defaults() -> list[Configuration]:
    """Every registry entry at its default parameters."""
    return [registry_get(name, p) for name, p in DEFAULT_PARAMS.items()]


def parse_spec(spec: str) -> Configuration:
    """Resolve ``name`` or ``name:p1,p2,...`` via the registry, else load a JSON file."""
    name, _, rest = spec.partition(":")
    if name in REGISTRY:
        if rest:
            try:
                params = [float(p) for p in rest.split(",") if p.strip()]
            except ValueError as exc:
                raise ParseFailure(f"bad registry parameters in {spec!r}") from exc
        else:
            params = list(DEFAULT_PARAMS[name])
        return registry_get(name, params)
    return load(spec)
