"""Alternative distributions G for pair differences.

Four kinds: normal, Laplace, Cauchy (each location tau, positive scale)
and the rare-effects mixture (1-eps) * base(center 0) + eps * base(center
tau_big).  Everything the design-sensitivity integrals need deep in the
tails is provided on the survival side: sf and abs_sf stay accurate down
to the smallest doubles, abs_quantile_sf inverts the absolute-value
survival function P(|Y| > y) = eps directly, and log-densities avoid
squaring huge arguments (the Cauchy branch switches to 2 log|y| once the
square would lose or overflow).

Sampling is inverse-CDF from one uniform stream per call (the mixture uses
a second stream of component indicators), so draws are reproducible across
platforms given the generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._normal import norm_cdf, norm_isf, norm_pdf, norm_ppf, norm_sf
from .errors import ConfigError, NumericError
from .rng import substream

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _draw_u(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniforms for inverse-CDF sampling, with exact 0 (possible from
    random()) nudged away so closed-form quantiles stay finite."""
    u = rng.random(n)
    u[u == 0.0] = 1e-300
    return u


class Distribution:
    """Shared derived quantities; subclasses provide the base primitives."""

    # -- absolute-value distribution H(y) = P(|Y| <= y) ------------------

    def abs_cdf(self, y):
        if isinstance(y, (float, int)):
            return self.cdf(y) - self.cdf(-y)
        y_arr = np.asarray(y, dtype=float)
        return self.cdf(y_arr) - self.cdf(-y_arr)

    def abs_sf(self, y):
        """P(|Y| > y) = sf(y) + cdf(-y); both pieces tail-accurate."""
        if isinstance(y, (float, int)):
            return self.sf(y) + self.cdf(-y)
        y_arr = np.asarray(y, dtype=float)
        return self.sf(y_arr) + self.cdf(-y_arr)

    def abs_quantile(self, x: float) -> float:
        """q with H(q) = x, x in (0,1)."""
        if not 0.0 < x < 1.0:
            raise ValueError(f"abs_quantile needs x in (0,1), got {x}")
        return self.abs_quantile_sf(1.0 - x)

    def abs_quantile_sf(self, eps: float) -> float:
        """q >= 0 with P(|Y| > q) = eps, for eps in (0, 1].

        Safeguarded Newton on log(abs_sf(y)) - log(eps); working on the
        log keeps the iteration well-scaled across two hundred orders of
        magnitude of tail mass.
        """
        if not 0.0 < eps <= 1.0:
            raise ValueError(f"abs_quantile_sf needs eps in (0,1], got {eps}")
        if eps >= 1.0:
            return 0.0
        target = math.log(eps)
        lo, flo = 0.0, 0.0            # log(abs_sf(0)) = log(1) = 0 > target
        hi = max(float(self.isf(eps / 2.0)), float(-self.quantile(eps / 2.0)),
                 1.0)
        fhi = math.log(float(self.abs_sf(hi)))
        guard = 0
        while fhi > target:           # expand until bracketed (rarely loops)
            hi *= 2.0
            fhi = math.log(float(self.abs_sf(hi)))
            guard += 1
            if guard > 200:
                raise NumericError("abs_quantile_sf: bracketing failed")
        y = 0.5 * (lo + hi)
        for _ in range(200):
            sf_y = float(self.abs_sf(y))
            fy = math.log(sf_y) - target
            if fy > 0.0:
                lo = y
            else:
                hi = y
            dens = float(self.pdf(y)) + float(self.pdf(-y))
            if dens > 0.0 and sf_y > 0.0:
                step = fy * sf_y / dens          # Newton on the log scale
                y_new = y + step
            else:
                y_new = 0.5 * (lo + hi)
            if not lo < y_new < hi:
                y_new = 0.5 * (lo + hi)
            if abs(y_new - y) <= 1e-13 * (1.0 + abs(y_new)):
                return y_new
            y = y_new
        raise NumericError(f"abs_quantile_sf did not converge (eps={eps})")

    # -- sampling ---------------------------------------------------------

    def sample(self, n: int, seed: int) -> np.ndarray:
        """n inverse-CDF draws from a dedicated substream of seed."""
        if n < 1:
            raise ValueError(f"need n >= 1, got {n}")
        return self.sample_rng(substream(seed, "sample", self.spec_string()), n)

    def sample_rng(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.quantile(_draw_u(rng, n))

    def spec_string(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Normal(Distribution):
    tau: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")

    def _z(self, y):
        if isinstance(y, (float, int)):
            return (y - self.tau) / self.sigma
        return (np.asarray(y, dtype=float) - self.tau) / self.sigma

    def pdf(self, y):
        return norm_pdf(self._z(y)) / self.sigma

    def logpdf(self, y):
        z = self._z(y)
        if isinstance(z, float):
            return -0.5 * z * z - math.log(self.sigma) - _LOG_SQRT_2PI
        return -0.5 * np.square(z) - math.log(self.sigma) - _LOG_SQRT_2PI

    def cdf(self, y):
        return norm_cdf(self._z(y))

    def sf(self, y):
        return norm_sf(self._z(y))

    def quantile(self, p):
        return self.tau + self.sigma * norm_ppf(p)

    def isf(self, q):
        return self.tau + self.sigma * norm_isf(q)

    def spec_string(self) -> str:
        return f"normal:{_fmt(self.tau)},{_fmt(self.sigma)}"


@dataclass(frozen=True)
class Laplace(Distribution):
    tau: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not self.b > 0.0:
            raise ConfigError(f"b must be positive, got {self.b}")

    def _z(self, y):
        if isinstance(y, (float, int)):
            return (y - self.tau) / self.b
        return (np.asarray(y, dtype=float) - self.tau) / self.b

    def pdf(self, y):
        z = self._z(y)
        if isinstance(z, float):
            return math.exp(-abs(z)) / (2.0 * self.b)
        return np.exp(-np.abs(z)) / (2.0 * self.b)

    def logpdf(self, y):
        z = self._z(y)
        if isinstance(z, float):
            return -abs(z) - math.log(2.0 * self.b)
        return -np.abs(z) - math.log(2.0 * self.b)

    def cdf(self, y):
        z = self._z(y)
        if isinstance(z, float):
            half = 0.5 * math.exp(-abs(z))
            return half if z < 0.0 else 1.0 - half
        return np.where(z < 0.0, 0.5 * np.exp(-np.abs(z)),
                        1.0 - 0.5 * np.exp(-np.abs(z)))

    def sf(self, y):
        z = self._z(y)
        if isinstance(z, float):
            half = 0.5 * math.exp(-abs(z))
            return half if z > 0.0 else 1.0 - half
        return np.where(z > 0.0, 0.5 * np.exp(-np.abs(z)),
                        1.0 - 0.5 * np.exp(-np.abs(z)))

    def quantile(self, p):
        if isinstance(p, (float, int)):
            if p < 0.5:
                return self.tau + self.b * math.log(2.0 * p)
            return self.tau - self.b * math.log(2.0 * (1.0 - p))
        p_arr = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore"):
            lower = self.tau + self.b * np.log(2.0 * p_arr)
            upper = self.tau - self.b * np.log(2.0 * (1.0 - p_arr))
        return np.where(p_arr < 0.5, lower, upper)

    def isf(self, q):
        if isinstance(q, (float, int)):
            if q < 0.5:
                return self.tau - self.b * math.log(2.0 * q)
            return self.tau + self.b * math.log(2.0 * (1.0 - q))
        q_arr = np.asarray(q, dtype=float)
        with np.errstate(divide="ignore"):
            upper = self.tau - self.b * np.log(2.0 * q_arr)
            lower = self.tau + self.b * np.log(2.0 * (1.0 - q_arr))
        return np.where(q_arr < 0.5, upper, lower)

    def spec_string(self) -> str:
        return f"laplace:{_fmt(self.tau)},{_fmt(self.b)}"


@dataclass(frozen=True)
class Cauchy(Distribution):
    tau: float = 0.0
    s: float = 1.0

    def __post_init__(self):
        if not self.s > 0.0:
            raise ConfigError(f"s must be positive, got {self.s}")

    def _z(self, y):
        if isinstance(y, (float, int)):
            return (y - self.tau) / self.s
        return (np.asarray(y, dtype=float) - self.tau) / self.s

    def pdf(self, y):
        z = self._z(y)
        if isinstance(z, float):
            if abs(z) > 1e154:            # z^2 would overflow; density ~ 0
                return 1.0 / (math.pi * self.s) / z / z
            return 1.0 / (math.pi * self.s * (1.0 + z * z))
        with np.errstate(over="ignore"):  # inf in the denominator -> 0.0
            return 1.0 / (math.pi * self.s * (1.0 + np.square(z)))

    def logpdf(self, y):
        z = self._z(y)
        # log(1 + z^2) = 2 log z + log(1 + 1/z^2); for z > 1e8 the second
        # term is below double resolution and z^2 would overflow near 1e154
        if isinstance(z, float):
            z = abs(z)
            val = 2.0 * math.log(z) if z > 1e8 else math.log1p(z * z)
            return -math.log(math.pi * self.s) - val
        z = np.abs(z)
        big = z > 1e8
        with np.errstate(divide="ignore"):
            safe = np.where(big, 1.0, z)
            val = np.where(big, 2.0 * np.log(z), np.log1p(np.square(safe)))
        return -math.log(math.pi * self.s) - val

    def cdf(self, y):
        z = self._z(y)
        if isinstance(z, float):
            if z < -1.0:
                return math.atan(-1.0 / z) / math.pi
            if z > 1.0:
                return 1.0 - math.atan(1.0 / z) / math.pi
            return 0.5 + math.atan(z) / math.pi
        core = 0.5 + np.arctan(z) / math.pi
        low = np.arctan(-1.0 / np.where(z == 0.0, 1.0, z)) / math.pi
        high = 1.0 - np.arctan(1.0 / np.where(z == 0.0, 1.0, z)) / math.pi
        return np.where(z < -1.0, low, np.where(z > 1.0, high, core))

    def sf(self, y):
        z = self._z(y)
        if isinstance(z, float):
            if z > 1.0:
                return math.atan(1.0 / z) / math.pi
            if z < -1.0:
                return 1.0 - math.atan(-1.0 / z) / math.pi
            return 0.5 - math.atan(z) / math.pi
        core = 0.5 - np.arctan(z) / math.pi
        high = np.arctan(1.0 / np.where(z == 0.0, 1.0, z)) / math.pi
        low = 1.0 - np.arctan(-1.0 / np.where(z == 0.0, 1.0, z)) / math.pi
        return np.where(z > 1.0, high, np.where(z < -1.0, low, core))

    def quantile(self, p):
        if isinstance(p, (float, int)):
            if p < 0.25:
                z = -1.0 / math.tan(math.pi * p)
            elif p > 0.75:
                z = 1.0 / math.tan(math.pi * (1.0 - p))
            else:
                z = math.tan(math.pi * (p - 0.5))
            return self.tau + self.s * z
        p_arr = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore"):
            low = -1.0 / np.tan(math.pi * p_arr)
            high = 1.0 / np.tan(math.pi * (1.0 - p_arr))
            core = np.tan(math.pi * (p_arr - 0.5))
        z = np.where(p_arr < 0.25, low, np.where(p_arr > 0.75, high, core))
        return self.tau + self.s * z

    def isf(self, q):
        if isinstance(q, (float, int)):
            if q < 0.25:
                z = 1.0 / math.tan(math.pi * q)
            elif q > 0.75:
                z = -1.0 / math.tan(math.pi * (1.0 - q))
            else:
                z = math.tan(math.pi * (0.5 - q))
            return self.tau + self.s * z
        q_arr = np.asarray(q, dtype=float)
        with np.errstate(divide="ignore"):
            high = 1.0 / np.tan(math.pi * q_arr)
            low = -1.0 / np.tan(math.pi * (1.0 - q_arr))
            core = np.tan(math.pi * (0.5 - q_arr))
        z = np.where(q_arr < 0.25, high, np.where(q_arr > 0.75, low, core))
        return self.tau + self.s * z

    def spec_string(self) -> str:
        return f"cauchy:{_fmt(self.tau)},{_fmt(self.s)}"


_BASE_KINDS = {"normal": Normal, "laplace": Laplace, "cauchy": Cauchy}


@dataclass(frozen=True)
class RareEffects(Distribution):
    """(1-eps) base(center 0, scale) + eps base(center tau_big, scale)."""

    base_kind: str = "normal"
    scale: float = 1.0
    eps: float = 0.1
    tau_big: float = 5.0

    def __post_init__(self):
        if self.base_kind not in _BASE_KINDS:
            raise ConfigError(f"unknown rare-effects base {self.base_kind!r}; "
                              f"expected one of {sorted(_BASE_KINDS)}")
        if not 0.0 <= self.eps <= 1.0:
            raise ConfigError(f"eps must be in [0,1], got {self.eps}")
        if not self.scale > 0.0:
            raise ConfigError(f"scale must be positive, got {self.scale}")
        make = _BASE_KINDS[self.base_kind]
        object.__setattr__(self, "_null", make(0.0, self.scale))
        object.__setattr__(self, "_affected", make(self.tau_big, self.scale))

    def pdf(self, y):
        return ((1.0 - self.eps) * self._null.pdf(y)
                + self.eps * self._affected.pdf(y))

    def logpdf(self, y):
        lw0 = math.log1p(-self.eps) if self.eps < 1.0 else -math.inf
        lw1 = math.log(self.eps) if self.eps > 0.0 else -math.inf
        return np.logaddexp(lw0 + self._null.logpdf(y),
                            lw1 + self._affected.logpdf(y))

    def cdf(self, y):
        return ((1.0 - self.eps) * self._null.cdf(y)
                + self.eps * self._affected.cdf(y))

    def sf(self, y):
        return ((1.0 - self.eps) * self._null.sf(y)
                + self.eps * self._affected.sf(y))

    def quantile(self, p):
        if np.ndim(p) == 0:
            return self._invert(float(p), survival=False)
        return self._invert_many(np.asarray(p, dtype=float), survival=False)

    def isf(self, q):
        if np.ndim(q) == 0:
            return self._invert(float(q), survival=True)
        return self._invert_many(np.asarray(q, dtype=float), survival=True)

    def _invert(self, p: float, *, survival: bool) -> float:
        """Component quantiles bracket the mixture's; bisect + Newton inside."""
        if not 0.0 < p < 1.0:
            raise ValueError(f"probability must be in (0,1), got {p}")
        comp = (self._null.isf(p), self._affected.isf(p)) if survival else \
            (self._null.quantile(p), self._affected.quantile(p))
        lo, hi = float(min(comp)), float(max(comp))
        if lo == hi:
            return lo

        def shortfall(y: float) -> float:
            return float(self.sf(y)) - p if survival else float(self.cdf(y)) - p

        y = 0.5 * (lo + hi)
        for _ in range(200):
            fy = shortfall(y)
            descending = survival
            if (fy > 0.0) == descending:
                lo = y
            else:
                hi = y
            dens = float(self.pdf(y))
            if dens > 0.0:
                y_new = y + fy / dens if survival else y - fy / dens
            else:
                y_new = 0.5 * (lo + hi)
            if not lo < y_new < hi:
                y_new = 0.5 * (lo + hi)
            if abs(y_new - y) <= 1e-13 * (1.0 + abs(y_new)):
                return y_new
            y = y_new
        raise NumericError(f"mixture quantile did not converge at p={p}")

    def _invert_many(self, p: np.ndarray, *, survival: bool) -> np.ndarray:
        """Vectorized _invert: one Newton-with-bisection pass over the whole
        array beats a Python loop of scalar solves by a couple of orders of
        magnitude, and the design-sensitivity quadrature calls this on every
        panel.  Newton runs on log(sf) (resp. log(cdf)) so deep-tail points
        stay well-scaled."""
        if p.size == 0:
            return p.astype(float)
        if not (np.all(p > 0.0) and np.all(p < 1.0)):
            bad = p[(p <= 0.0) | (p >= 1.0)]
            raise ValueError(f"probability must be in (0,1), got {bad[0]}")
        comp0 = (self._null.isf(p) if survival else self._null.quantile(p))
        comp1 = (self._affected.isf(p) if survival
                 else self._affected.quantile(p))
        lo = np.minimum(comp0, comp1)
        hi = np.maximum(comp0, comp1)
        y = 0.5 * (lo + hi)
        log_p = np.log(p)
        done = lo == hi
        for _ in range(200):
            if np.all(done):
                return y
            val = self.sf(y) if survival else self.cdf(y)
            with np.errstate(divide="ignore"):
                gap = np.where(val > 0.0, np.log(val), -np.inf) - log_p
            # survival side decreases, cdf side increases in y
            too_small = (gap > 0.0) if survival else (gap < 0.0)
            lo = np.where(~done & too_small, y, lo)
            hi = np.where(~done & ~too_small, y, hi)
            dens = self.pdf(y)
            ok = (dens > 0.0) & (val > 0.0) & np.isfinite(gap)
            sign = 1.0 if survival else -1.0
            with np.errstate(invalid="ignore"):
                newton = y + sign * gap * val / np.where(ok, dens, 1.0)
            y_new = np.where(ok & (newton > lo) & (newton < hi),
                             newton, 0.5 * (lo + hi))
            newly = ~done & (np.abs(y_new - y) <= 1e-13 * (1.0 + np.abs(y_new)))
            y = np.where(done, y, y_new)
            done = done | newly
        raise NumericError("mixture quantile did not converge on array input")

    def sample_rng(self, rng: np.random.Generator, n: int) -> np.ndarray:
        affected = rng.random(n) < self.eps
        u = _draw_u(rng, n)
        return np.where(affected,
                        self._affected.quantile(u),
                        self._null.quantile(u))

    def spec_string(self) -> str:
        return (f"rare:{self.base_kind},{_fmt(self.scale)},"
                f"{_fmt(self.eps)},{_fmt(self.tau_big)}")


@dataclass(frozen=True)
class TailRatioBound:
    """Grid proxy for liminf_{q->inf} g(q)/g(-q); inf-like when diverging."""

    value: float
    diverged: bool
    q_at: float


def tail_ratio_liminf(d: Distribution, q_grid: np.ndarray | None = None
                      ) -> TailRatioBound:
    """Evaluate g(q)/g(-q) on a large-q grid.

    Reports the grid minimum as the liminf proxy.  When the log-ratio has
    climbed by more than log(1e3) from the grid start the ratio is treated
    as diverging (normal-type tails) and the grid maximum plus a flag is
    returned instead.
    """
    if q_grid is None:
        center = abs(getattr(d, "tau", None) or getattr(d, "tau_big", 0.0))
        scale = getattr(d, "sigma", None) or getattr(d, "b", None) \
            or getattr(d, "s", None) or getattr(d, "scale", 1.0)
        q_lo = 10.0 * (center + scale + 1.0)
        q_grid = np.geomspace(q_lo, 1e8, 120)
    q_grid = np.asarray(q_grid, dtype=float)
    log_ratio = np.asarray(d.logpdf(q_grid) - d.logpdf(-q_grid), dtype=float)
    if not np.all(np.isfinite(log_ratio)):
        raise NumericError("tail ratio: zero or non-finite density on the grid")
    if log_ratio[-1] - log_ratio[0] > math.log(1e3):
        i = int(np.argmax(log_ratio))
        with np.errstate(over="ignore"):
            return TailRatioBound(float(np.exp(log_ratio[i])), True,
                                  float(q_grid[i]))
    i = int(np.argmin(log_ratio))
    return TailRatioBound(float(np.exp(log_ratio[i])), False, float(q_grid[i]))


def _fmt(v: float) -> str:
    """Shortest clean decimal for spec strings (5.0 -> '5')."""
    f = float(v)
    if f == int(f) and abs(f) < 1e15:
        return str(int(f))
    return repr(f)


def parse_dist(spec: str) -> Distribution:
    """Parse "normal:tau,sigma" | "laplace:tau,b" | "cauchy:tau,s"
    | "rare:base,scale,eps,taubig"."""
    text = spec.strip().lower()
    head, _, params = text.partition(":")
    parts = [p for p in params.split(",") if p != ""] if params else []
    try:
        if head in _BASE_KINDS:
            if len(parts) != 2:
                raise ConfigError(
                    f"{head} takes two parameters (center, scale), got {params!r}")
            return _BASE_KINDS[head](float(parts[0]), float(parts[1]))
        if head == "rare":
            if len(parts) != 4:
                raise ConfigError(
                    "rare takes four parameters base,scale,eps,taubig, "
                    f"got {params!r}")
            return RareEffects(parts[0], float(parts[1]), float(parts[2]),
                               float(parts[3]))
    except ValueError as exc:
        raise ConfigError(f"bad numeric parameter in {spec!r}") from exc
    raise ConfigError(f"unknown distribution kind {head!r}")
