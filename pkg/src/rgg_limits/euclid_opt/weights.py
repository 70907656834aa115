"""Edge weight functions for Euclidean optimization functionals.

All built-in weights are radial, so symmetry comes for free; what varies is
the behaviour near the origin (vanishing, or identically zero on a small
ball), the growth rate, and whether the weight saturates at a finite level,
possibly exactly beyond some radius.  Those are the features the limit
statements care about, so the descriptor tracks them explicitly:

* ``w_max``     -- the limit of the profile at infinity (may be ``inf``),
* ``c5``        -- a radius beyond which the profile equals ``w_max`` exactly
                   (or ``None``),
* ``p_growth``  -- an exponent p with profile(s) <= c4 * max(s**p, 1),
* ``zero_radius`` -- the profile vanishes on [0, zero_radius],
* ``radius_reaching`` -- given a < w_max, a certified radius beyond which
                   the profile stays >= a (used to compute ``c5`` of
                   truncations without trusting a numeric search).

Grammar for the string form (used by the CLI): ``pow:1.5``, ``log``,
``indicator``, ``sinwave``, ``powsum:0.5:2``, and the combinators
``trunc:<spec>:<level>`` (pointwise minimum with a constant) and
``restrict:<spec>:<radius>`` (zero out a ball around the origin).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = ["WeightFunction", "parse_weight", "truncate", "restrict",
           "validate_weight", "BUILTIN_WEIGHTS"]


@dataclass
class WeightFunction:
    name: str
    radial: Callable[[np.ndarray], np.ndarray]
    w_max: float
    c5: Optional[float] = None
    p_growth: Optional[float] = None
    zero_radius: float = 0.0
    radius_reaching: Optional[Callable[[float], float]] = None

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(self.radial(np.atleast_1d(np.linalg.norm(x))))

    def on_distances(self, s: np.ndarray) -> np.ndarray:
        return self.radial(np.asarray(s, dtype=float))

    def pairwise(self, p: np.ndarray, q: np.ndarray = None) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        q = p if q is None else np.asarray(q, dtype=float)
        diff = p[:, None, :] - q[None, :, :]
        return self.on_distances(np.sqrt(np.einsum("ijk,ijk->ij", diff, diff)))


def _pow(p: float) -> WeightFunction:
    if not p > 0:
        raise ValueError("power exponent must be positive")
    return WeightFunction(
        name=f"pow:{p:g}",
        radial=lambda s, p=p: np.asarray(s, dtype=float) ** p,
        w_max=math.inf,
        p_growth=p,
        radius_reaching=lambda a, p=p: a ** (1.0 / p))


def _indicator() -> WeightFunction:
    def radial(s):
        s = np.asarray(s, dtype=float)
        return (s > 1.0).astype(float)
    return WeightFunction(
        name="indicator", radial=radial, w_max=1.0, c5=1.0, p_growth=0.5,
        zero_radius=1.0,
        radius_reaching=lambda a: 1.0 if a <= 1.0 else math.inf)


def _log() -> WeightFunction:
    return WeightFunction(
        name="log",
        radial=lambda s: np.log1p(np.asarray(s, dtype=float)),
        w_max=math.inf,
        p_growth=0.5,
        radius_reaching=lambda a: math.expm1(a))


def _sinwave() -> WeightFunction:
    # saturates at 1 in the limit without ever being eventually constant
    def radial(s):
        s = np.asarray(s, dtype=float)
        out = np.ones_like(s)
        nz = s != 0
        out[nz] = 1.0 - np.sin(s[nz]) / s[nz]
        out[~nz] = 0.0
        return out
    def reach(a):
        if a >= 1.0:
            return math.inf
        # for s >= 1/(1-a) we have sin(s)/s <= 1/s <= 1-a
        return 1.0 / (1.0 - a)
    return WeightFunction(name="sinwave", radial=radial, w_max=1.0,
                          p_growth=0.5, radius_reaching=reach)


def _powsum(p: float, q: float) -> WeightFunction:
    if not (p > 0 and q > 0):
        raise ValueError("powsum exponents must be positive")
    def reach(a):
        # strictly increasing profile: bisect then certify by monotonicity
        lo, hi = 0.0, 1.0
        f = lambda s: s ** p + s ** q
        while f(hi) < a:
            hi *= 2.0
        for _ in range(200):
            mid = (lo + hi) / 2.0
            if f(mid) >= a:
                hi = mid
            else:
                lo = mid
        return hi
    return WeightFunction(
        name=f"powsum:{p:g}:{q:g}",
        radial=lambda s, p=p, q=q: (lambda t: t ** p + t ** q)(np.asarray(s, dtype=float)),
        w_max=math.inf,
        p_growth=max(p, q),
        radius_reaching=reach)


def truncate(w: WeightFunction, level: float) -> WeightFunction:
    """Pointwise minimum with a constant; saturation radius is certified
    through the inner profile's ``radius_reaching``."""
    if not level > 0:
        raise ValueError("truncation level must be positive")
    new_max = min(w.w_max, level)
    if level < w.w_max and w.radius_reaching is not None:
        c5 = float(w.radius_reaching(level))
    elif level >= w.w_max:
        c5 = w.c5
    else:
        c5 = None
    def reach(a, w=w, level=level):
        if a > level:
            return math.inf
        return w.radius_reaching(a) if w.radius_reaching else math.inf
    return WeightFunction(
        name=f"trunc:{w.name}:{level:g}",
        radial=lambda s, w=w, level=level: np.minimum(w.radial(s), level),
        w_max=new_max,
        c5=c5,
        p_growth=w.p_growth,
        zero_radius=w.zero_radius,
        radius_reaching=reach)


def restrict(w: WeightFunction, radius: float) -> WeightFunction:
    """Zero out the weight on the closed ball of the given radius."""
    if not radius > 0:
        raise ValueError("restriction radius must be positive")
    def radial(s, w=w, radius=radius):
        s = np.asarray(s, dtype=float)
        return np.where(s <= radius, 0.0, w.radial(s))
    c5 = None
    if w.c5 is not None:
        c5 = max(w.c5, radius)
    def reach(a, w=w, radius=radius):
        if w.radius_reaching is None:
            return math.inf
        return max(float(w.radius_reaching(a)), radius)
    return WeightFunction(
        name=f"restrict:{w.name}:{radius:g}",
        radial=radial,
        w_max=w.w_max,
        c5=c5,
        p_growth=w.p_growth,
        zero_radius=max(w.zero_radius, radius),
        radius_reaching=reach)


BUILTIN_WEIGHTS = ("pow", "log", "indicator", "sinwave", "powsum",
                   "trunc", "restrict")


def parse_weight(spec: str) -> WeightFunction:
    """Build a weight function from its string form."""
    parts = [p for p in str(spec).strip().split(":") if p != ""]
    if not parts:
        raise ValueError("empty weight spec")
    head = parts[0]
    if head == "pow":
        if len(parts) != 2:
            raise ValueError("pow takes one exponent, e.g. pow:1.5")
        return _pow(float(parts[1]))
    if head == "log":
        if len(parts) != 1:
            raise ValueError("log takes no parameters")
        return _log()
    if head == "indicator":
        if len(parts) != 1:
            raise ValueError("indicator takes no parameters")
        return _indicator()
    if head == "sinwave":
        if len(parts) != 1:
            raise ValueError("sinwave takes no parameters")
        return _sinwave()
    if head == "powsum":
        if len(parts) != 3:
            raise ValueError("powsum takes two exponents, e.g. powsum:0.5:2")
        return _powsum(float(parts[1]), float(parts[2]))
    if head in ("trunc", "restrict"):
        if len(parts) < 3:
            raise ValueError(f"{head} needs an inner spec and a parameter")
        inner = parse_weight(":".join(parts[1:-1]))
        param = float(parts[-1])
        return truncate(inner, param) if head == "trunc" else restrict(inner, param)
    raise ValueError(f"unknown weight {head!r}; builtins: {BUILTIN_WEIGHTS}")


def validate_weight(w: WeightFunction, dim: int = 2, s_max: float = 200.0,
                    samples: int = 2000) -> dict:
    """Numerical audit of the structural requirements of a weight.

    Checks nonnegativity, vanishing at the origin, saturation toward
    ``w_max`` when finite, the growth envelope against ``p_growth``, exact
    constancy beyond ``c5`` when declared, and the zero ball.  Returns a
    report dict with an overall ``ok``.
    """
    s = np.linspace(0.0, s_max, samples)
    vals = w.on_distances(s)
    report = {"name": w.name, "dim": dim}
    report["nonnegative"] = bool(np.all(vals >= -1e-12))
    report["zero_at_origin"] = bool(abs(float(w.on_distances(np.array([0.0]))[0])) <= 1e-12)
    small = np.geomspace(1e-8, 1e-2, 25)
    report["vanishing_near_origin"] = bool(
        np.all(w.on_distances(small) <= w.on_distances(np.array([1e-2]))[0] + 1e-9)
        and float(np.max(w.on_distances(small[:5]))) <= 1e-2 + 1e-9) \
        if w.zero_radius == 0 else True
    if math.isfinite(w.w_max):
        tail = w.on_distances(np.geomspace(max(s_max, 10.0), 100 * max(s_max, 10.0), 50))
        report["saturates"] = bool(np.max(np.abs(tail - w.w_max)) <= 1e-2)
    else:
        report["saturates"] = True  # nothing to saturate to
    if w.p_growth is not None:
        env = np.maximum(np.maximum(s, 1e-300) ** w.p_growth, 1.0)
        c4 = float(np.max(vals / env))
        report["growth_c4"] = c4
        report["growth_ok"] = bool(math.isfinite(c4))
        report["growth_exponent_ok_for_dim"] = bool(0 < w.p_growth < dim)
    else:
        report["growth_ok"] = math.isfinite(w.w_max)
        report["growth_exponent_ok_for_dim"] = report["growth_ok"]
    if w.c5 is not None:
        beyond = np.linspace(w.c5 * (1 + 1e-9) + 1e-9, w.c5 + s_max, 200)
        report["constant_beyond_c5"] = bool(
            np.all(w.on_distances(beyond) == w.w_max))
    else:
        report["constant_beyond_c5"] = True
    if w.zero_radius > 0:
        inside = np.linspace(0.0, w.zero_radius, 100)
        report["zero_ball"] = bool(np.all(w.on_distances(inside) == 0.0))
    else:
        report["zero_ball"] = True
    report["ok"] = all(report[k] for k in
                       ("nonnegative", "zero_at_origin", "vanishing_near_origin",
                        "saturates", "growth_ok", "constant_beyond_c5",
                        "zero_ball"))
    return report
