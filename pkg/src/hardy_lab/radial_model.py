"""Radially symmetric graph models given by sphere data.

A model records, for each distance r from a root vertex, the outward degree
``k_plus(r)``, the inward degree ``k_minus(r)`` and the sphere volume
``vol(r)``.  These describe every rooted graph whose structure depends only
on the distance to the root.  The boundary area

    area(r) = k_minus(r) * vol(r) = k_plus(r - 1) * vol(r - 1)

ties the three sequences together; constructors reject data that breaks the
identity.  Radial data is kept exact (ints and Fractions) wherever the
inputs are exact, so downstream checks can separate genuine numerical error
from modelling error.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    InconsistentModelError,
    InvalidParameterError,
    NeedsTailError,
    NoCanonicalRealizationError,
    SizeLimitExceededError,
    UndefinedAtOriginError,
)

TAIL_KINDS = ("finite", "eventually-geometric", "unspecified")

MAX_VERTEX_EXPANSION = 100_000
MAX_EDGE_EXPANSION = 2_000_000


def _as_radius(r):
    try:
        r = operator.index(r)
    except TypeError:
        raise InvalidParameterError(f"radius must be an integer, got {r!r}") from None
    if r < 0:
        raise InvalidParameterError(f"radius must be nonnegative, got {r}")
    return r


def _is_exact(x):
    return isinstance(x, (int, Fraction)) or isinstance(x, np.integer)


def _log_of_exact(v):
    # math.log takes arbitrary-size ints, which keeps huge sphere volumes usable
    if isinstance(v, Fraction):
        return math.log(v.numerator) - math.log(v.denominator)
    if _is_exact(v):
        return math.log(int(v))
    return math.log(v)


@dataclass(frozen=True)
class Tail:
    """What is assumed about the model beyond the stored depth.

    kind "finite" means the graph simply ends at the stored depth.  kind
    "eventually-geometric" asserts area(r + 1) = kappa_inf * area(r) for all
    r >= start.  kind "unspecified" promises nothing, so computations that
    need the tail must either raise or fall back to data-driven bounds.
    """

    kind: str
    kappa_inf: Fraction | None = None
    start: int = 1

    def __post_init__(self):
        if self.kind not in TAIL_KINDS:
            raise InvalidParameterError(
                f"tail kind must be one of {TAIL_KINDS}, got {self.kind!r}"
            )
        if self.kind == "eventually-geometric":
            if self.kappa_inf is None:
                raise InvalidParameterError("geometric tail needs kappa_inf")
            if self.kappa_inf <= 0:
                raise InvalidParameterError("kappa_inf must be positive")
            if self.start < 1:
                raise InvalidParameterError("geometric tail start must be >= 1")
        elif self.kappa_inf is not None:
            raise InvalidParameterError(f"{self.kind} tail takes no kappa_inf")


class RadialModel:
    """Immutable radial data for spheres 0..depth.

    ``k_plus(r)`` is defined for 0 <= r < depth, ``k_minus(r)``, ``vol(r)``
    and ``area(r)`` for 0 <= r <= depth.  Reading past the stored depth
    raises NeedsTailError; rebuild the model deeper instead of guessing.
    Use the ``make_*`` constructors rather than instantiating directly.
    """

    def __init__(self, *, k_plus_of, k_minus_of, vol_of, area_of=None,
                 depth, tail, label, family):
        depth = _as_radius(depth)
        if depth < 2:
            raise InvalidParameterError("model depth must be at least 2")
        self._k_plus_of = k_plus_of
        self._k_minus_of = k_minus_of
        self._vol_of = vol_of
        self._area_of = area_of or (lambda r: k_minus_of(r) * vol_of(r))
        self._depth = depth
        self._tail = tail
        self._label = label
        self._family = family
        self._float_cache = {}

    @property
    def depth(self):
        return self._depth

    @property
    def tail(self):
        return self._tail

    @property
    def label(self):
        return self._label

    @property
    def family(self):
        """("tree", d), ("antitree",) or ("custom",)."""
        return self._family

    def __repr__(self):
        return (f"RadialModel({self._label!r}, depth={self._depth}, "
                f"tail={self._tail.kind!r})")

    def _need(self, r, bound, what):
        if r > bound:
            raise NeedsTailError(
                f"{what}({r}) lies beyond the stored depth {self._depth}; "
                "rebuild the model with a larger depth"
            )

    def k_plus(self, r):
        """Outward degree at radius r (defined for r < depth)."""
        r = _as_radius(r)
        self._need(r, self._depth - 1, "k_plus")
        return self._k_plus_of(r)

    def k_minus(self, r):
        """Inward degree at radius r; the origin has none, so k_minus(0) = 0."""
        r = _as_radius(r)
        if r == 0:
            return 0
        self._need(r, self._depth, "k_minus")
        return self._k_minus_of(r)

    def vol(self, r):
        """Number of vertices on the sphere of radius r."""
        r = _as_radius(r)
        self._need(r, self._depth, "vol")
        return self._vol_of(r)

    def area(self, r):
        """Edge boundary area k_minus(r) * vol(r); area(0) = 0."""
        r = _as_radius(r)
        if r == 0:
            return 0
        self._need(r, self._depth, "area")
        return self._area_of(r)

    def kappa(self, r):
        """Degree ratio k_plus(r) / k_minus(r), exact when the data is exact."""
        r = _as_radius(r)
        if r == 0:
            raise UndefinedAtOriginError(
                "kappa(0) is undefined because the origin has no inward sphere"
            )
        self._need(r, self._depth - 1, "kappa")
        kp = self._k_plus_of(r)
        km = self._k_minus_of(r)
        if _is_exact(kp) and _is_exact(km):
            return Fraction(kp) / Fraction(km)
        return kp / km

    # -- bulk float views (cached, grow on demand, returned read-only) -----

    def _cached(self, name, of, r_hi):
        arr = self._float_cache.get(name)
        if arr is None or arr.shape[0] < r_hi + 1:
            arr = np.fromiter((float(of(r)) for r in range(r_hi + 1)),
                              dtype=float, count=r_hi + 1)
            arr.flags.writeable = False
            self._float_cache[name] = arr
        return arr[: r_hi + 1]

    def k_plus_floats(self, r_hi):
        """k_plus(0..r_hi) as a float array."""
        r_hi = _as_radius(r_hi)
        self._need(r_hi, self._depth - 1, "k_plus")
        return self._cached("k_plus", self._k_plus_of, r_hi)

    def k_minus_floats(self, r_hi):
        """k_minus(0..r_hi) as a float array (entry 0 is 0)."""
        r_hi = _as_radius(r_hi)
        self._need(r_hi, self._depth, "k_minus")
        return self._cached(
            "k_minus", lambda r: 0.0 if r == 0 else self._k_minus_of(r), r_hi
        )

    def kappa_floats(self, r_hi):
        """kappa(1..r_hi) as a float array; entry 0 is NaN."""
        r_hi = _as_radius(r_hi)
        self._need(r_hi, self._depth - 1, "kappa")
        with np.errstate(divide="ignore"):
            out = self.k_plus_floats(r_hi) / self.k_minus_floats(r_hi)
        out = np.array(out)
        out[0] = np.nan
        out.flags.writeable = False
        return out

    def log_vol_floats(self, r_hi):
        """Natural log of vol(0..r_hi).  Exact volumes never overflow here."""
        r_hi = _as_radius(r_hi)
        self._need(r_hi, self._depth, "vol")
        return self._cached("log_vol", lambda r: _log_of_exact(self._vol_of(r)), r_hi)

    def log_area_floats(self, r_hi):
        """Natural log of area(0..r_hi); entry 0 is -inf."""
        r_hi = _as_radius(r_hi)
        self._need(r_hi, self._depth, "area")
        return self._cached(
            "log_area",
            lambda r: -math.inf if r == 0 else _log_of_exact(self._area_of(r)),
            r_hi,
        )

    def radial_data(self, r_max=None):
        """Rows (r, k_plus, k_minus, vol) for r = 0..r_max.

        k_plus is None on the last stored sphere, where it is unknown.
        """
        r_max = self._depth if r_max is None else _as_radius(r_max)
        self._need(r_max, self._depth, "radial_data")
        rows = []
        for r in range(r_max + 1):
            kp = self._k_plus_of(r) if r < self._depth else None
            km = 0 if r == 0 else self._k_minus_of(r)
            rows.append((r, kp, km, self._vol_of(r)))
        return rows


def make_tree(d, depth):
    """Rooted tree in which every vertex has exactly d forward neighbors.

    Spheres have vol(r) = d**r vertices, each non-root vertex has one inward
    neighbor, and area(r) = d**r.  For d >= 2 the area grows geometrically
    with ratio d from radius 1 on, which the tail metadata records; d = 1 is
    the half line and gets an unspecified tail.
    """
    d = operator.index(d)
    if d < 1:
        raise InvalidParameterError("branching number d must be a positive integer")
    depth = _as_radius(depth)
    if depth < 2:
        raise InvalidParameterError("tree depth must be at least 2")
    if d >= 2:
        tail = Tail("eventually-geometric", kappa_inf=Fraction(d), start=1)
    else:
        tail = Tail("unspecified")
    return RadialModel(
        k_plus_of=lambda r: d,
        k_minus_of=lambda r: 1,
        vol_of=lambda r: d ** r,
        area_of=lambda r: d ** r,
        depth=depth,
        tail=tail,
        label=f"tree(d={d})",
        family=("tree", d),
    )


def make_antitree(sphere_sizes, depth, label=None):
    """Layered graph whose consecutive spheres are completely joined.

    ``sphere_sizes`` is a callable r -> s(r) or a sequence of positive
    integers with s(0) = 1.  Complete joins give k_plus(r) = s(r + 1),
    k_minus(r) = s(r - 1) and vol(r) = s(r), so area(r) = s(r - 1) * s(r).
    """
    depth = _as_radius(depth)
    if depth < 2:
        raise InvalidParameterError("antitree depth must be at least 2")
    if callable(sphere_sizes):
        raw = [sphere_sizes(r) for r in range(depth + 1)]
    else:
        raw = list(sphere_sizes)
        if len(raw) < depth + 1:
            raise InvalidParameterError(
                f"need sphere sizes up to radius {depth}, got {len(raw)} values"
            )
        raw = raw[: depth + 1]
    s = []
    for r, v in enumerate(raw):
        try:
            v = operator.index(v)
        except TypeError:
            raise InvalidParameterError(
                f"sphere size at radius {r} must be an integer, got {v!r}"
            ) from None
        if v < 1:
            raise InvalidParameterError(f"sphere size at radius {r} must be positive")
        s.append(v)
    if s[0] != 1:
        raise InvalidParameterError("sphere size at the origin must be 1")
    s = tuple(s)
    return RadialModel(
        k_plus_of=lambda r: s[r + 1],
        k_minus_of=lambda r: s[r - 1],
        vol_of=lambda r: s[r],
        area_of=lambda r: s[r - 1] * s[r],
        depth=depth,
        tail=Tail("unspecified"),
        label=label or "antitree",
        family=("antitree",),
    )


def _positive(name, value, r):
    bad = value <= 0 if not isinstance(value, float) else (not value > 0)
    if bad or (isinstance(value, float) and not math.isfinite(value)):
        raise InvalidParameterError(f"{name}({r}) must be positive, got {value!r}")


def make_custom(k_plus, k_minus, vol=None, *, tail=None, label="custom"):
    """Model from explicit sequences, validated for area compatibility.

    ``k_minus[0]`` must be 0.  With ``vol=None`` the volumes are derived
    from vol(0) = 1 through the compatibility identity.  Supplied volumes
    are checked against k_minus(r) vol(r) = k_plus(r-1) vol(r-1), exactly
    for exact inputs and to 1e-12 relative tolerance once floats appear;
    a violation raises InconsistentModelError carrying the first bad radius.
    """
    kp = tuple(k_plus)
    km = tuple(k_minus)
    depth = len(km) - 1
    if depth < 2:
        raise InvalidParameterError("need radial data for radii 0..2 at least")
    if len(kp) != depth:
        raise InvalidParameterError(
            f"expected {depth} outward degrees for depth {depth}, got {len(kp)}"
        )
    if km[0] != 0:
        raise InvalidParameterError("k_minus(0) must be 0: the origin has no inward edges")
    for r in range(depth):
        _positive("k_plus", kp[r], r)
    for r in range(1, depth + 1):
        _positive("k_minus", km[r], r)

    if vol is None:
        exact = all(_is_exact(x) for x in kp) and all(_is_exact(x) for x in km)
        v = [Fraction(1) if exact else 1.0]
        for r in range(1, depth + 1):
            if exact:
                v.append(v[-1] * Fraction(kp[r - 1]) / Fraction(km[r]))
            else:
                v.append(v[-1] * kp[r - 1] / km[r])
        vv = tuple(x if not (isinstance(x, Fraction) and x.denominator == 1) else int(x)
                   for x in v)
    else:
        vv = tuple(vol)
        if len(vv) != depth + 1:
            raise InvalidParameterError(
                f"expected {depth + 1} volumes for depth {depth}, got {len(vv)}"
            )
        for r in range(depth + 1):
            _positive("vol", vv[r], r)
        for r in range(1, depth + 1):
            lhs = km[r] * vv[r]
            rhs = kp[r - 1] * vv[r - 1]
            if any(isinstance(x, float) for x in (km[r], vv[r], kp[r - 1], vv[r - 1])):
                ok = math.isclose(lhs, rhs, rel_tol=1e-12)
            else:
                ok = lhs == rhs
            if not ok:
                raise InconsistentModelError(
                    r,
                    f"area mismatch at radius {r}: "
                    f"k_minus*vol = {lhs} but k_plus*vol from radius {r - 1} = {rhs}",
                )

    return RadialModel(
        k_plus_of=kp.__getitem__,
        k_minus_of=km.__getitem__,
        vol_of=vv.__getitem__,
        depth=depth,
        tail=tail or Tail("unspecified"),
        label=label,
        family=("custom",),
    )


@dataclass(frozen=True)
class VertexGraph:
    """Explicit realization of a ball of a radial model.

    Vertices are numbered sphere by sphere; ``sphere_slices[r]`` selects the
    vertices at distance r and ``edges`` lists each edge once as an
    (inner vertex, outer vertex) index pair.
    """

    radius: int
    radius_of: np.ndarray
    sphere_slices: tuple
    edges: np.ndarray
    label: str

    @property
    def n_vertices(self):
        return int(self.radius_of.shape[0])

    @property
    def n_edges(self):
        return int(self.edges.shape[0])


def expand_vertex_graph(model, radius, max_vertices=MAX_VERTEX_EXPANSION):
    """Materialize the ball of the given radius as an explicit graph.

    Only the tree and antitree families have a canonical vertex-level
    realization; generic radial data is compatible with many different
    graphs and is refused.  The vertex count is checked against
    ``max_vertices`` before anything is allocated.
    """
    radius = _as_radius(radius)
    if radius > model.depth:
        raise NeedsTailError(
            f"ball of radius {radius} exceeds the stored depth {model.depth}"
        )
    fam = model.family[0]
    if fam not in ("tree", "antitree"):
        raise NoCanonicalRealizationError(
            "custom radial data does not determine a vertex-level graph"
        )
    sizes = [int(model.vol(r)) for r in range(radius + 1)]
    n = sum(sizes)
    if n > max_vertices:
        raise SizeLimitExceededError(
            f"ball of radius {radius} has {n} vertices, cap is {max_vertices}"
        )
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    radius_of = np.repeat(np.arange(radius + 1), sizes)
    sphere_slices = tuple(
        slice(int(offsets[r]), int(offsets[r + 1])) for r in range(radius + 1)
    )

    if fam == "tree":
        d = model.family[1]
        heads = np.arange(offsets[1], offsets[radius + 1], dtype=np.int64)
        tails = np.empty_like(heads)
        pos = 0
        for r in range(1, radius + 1):
            cnt = sizes[r]
            # vertex j on sphere r hangs below vertex j // d on sphere r - 1
            tails[pos: pos + cnt] = offsets[r - 1] + np.arange(cnt, dtype=np.int64) // d
            pos += cnt
        edges = np.stack([tails, heads], axis=1)
    else:
        n_edges = sum(sizes[r] * sizes[r + 1] for r in range(radius))
        if n_edges > MAX_EDGE_EXPANSION:
            raise SizeLimitExceededError(
                f"ball of radius {radius} has {n_edges} edges, cap is {MAX_EDGE_EXPANSION}"
            )
        chunks = []
        for r in range(radius):
            inner = np.arange(offsets[r], offsets[r + 1], dtype=np.int64)
            outer = np.arange(offsets[r + 1], offsets[r + 2], dtype=np.int64)
            ii, oo = np.meshgrid(inner, outer, indexing="ij")
            chunks.append(np.stack([ii.ravel(), oo.ravel()], axis=1))
        edges = np.concatenate(chunks, axis=0)

    return VertexGraph(
        radius=radius,
        radius_of=radius_of,
        sphere_slices=sphere_slices,
        edges=edges,
        label=model.label,
    )


# -- plain-text serialization ----------------------------------------------

def _format_value(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def save_model(model, path, r_max=None):
    """Write radial data to ``path`` in the line-based v1 format.

    Layout: a "radial-model v1" header, an optional "label ..." line, a
    "tail ..." line, then one "r k_plus k_minus vol" row per radius.  The
    outward degree of the outermost stored sphere is unknown and written
    as "-".
    """
    rows = model.radial_data(r_max)
    lines = ["radial-model v1"]
    if model.label:
        lines.append(f"label {model.label}")
    t = model.tail
    if t.kind == "eventually-geometric":
        lines.append(f"tail geometric {_format_value(t.kappa_inf)} {t.start}")
    else:
        lines.append(f"tail {t.kind}")
    last = rows[-1][0]
    for r, kp, km, v in rows:
        # the saved file ends at this radius, so the final outward degree
        # is out of range for the loaded model even when we know it here
        kp_s = "-" if kp is None or r == last else _format_value(kp)
        lines.append(f"{r} {kp_s} {_format_value(km)} {_format_value(v)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_value(token, where):
    try:
        f = Fraction(token)
    except (ValueError, ZeroDivisionError):
        try:
            return float(token)
        except ValueError:
            raise InvalidParameterError(f"cannot parse number {token!r} in {where}") from None
    return int(f) if f.denominator == 1 else f


def load_model(path):
    """Read a model written by save_model.  Loaded models are family custom."""
    with open(path, "r", encoding="utf-8") as fh:
        raw_lines = fh.read().splitlines()
    lines = [ln.strip() for ln in raw_lines]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "radial-model v1":
        raise InvalidParameterError(f"{path}: missing 'radial-model v1' header")

    label = None
    tail = None
    k_plus, k_minus, vol = [], [], []
    expected_r = 0
    for ln in lines[1:]:
        tokens = ln.split()
        if tokens[0] == "label":
            label = ln[len("label"):].strip()
            continue
        if tokens[0] == "tail":
            if tokens[1:] == ["unspecified"]:
                tail = Tail("unspecified")
            elif tokens[1:] == ["finite"]:
                tail = Tail("finite")
            elif len(tokens) in (3, 4) and tokens[1] == "geometric":
                kappa_inf = Fraction(_parse_value(tokens[2], "tail line"))
                start = int(tokens[3]) if len(tokens) == 4 else 1
                tail = Tail("eventually-geometric", kappa_inf=kappa_inf, start=start)
            else:
                raise InvalidParameterError(f"{path}: bad tail line {ln!r}")
            continue
        if len(tokens) != 4:
            raise InvalidParameterError(f"{path}: expected 4 columns, got {ln!r}")
        r = int(tokens[0])
        if r != expected_r:
            raise InvalidParameterError(
                f"{path}: rows must cover consecutive radii, expected {expected_r} got {r}"
            )
        expected_r += 1
        if tokens[1] == "-":
            k_plus.append(None)
        else:
            k_plus.append(_parse_value(tokens[1], f"row {r}"))
        k_minus.append(_parse_value(tokens[2], f"row {r}"))
        vol.append(_parse_value(tokens[3], f"row {r}"))

    depth = expected_r - 1
    if any(v is None for v in k_plus[:-1]) or (k_plus and k_plus[-1] is not None):
        raise InvalidParameterError(
            f"{path}: exactly the final row must use '-' for k_plus"
        )
    return make_custom(
        k_plus[:-1], k_minus, vol, tail=tail, label=label or "custom"
    )
