"""Score functions phi: (0,1) -> [0, inf) and their integrals.

Four variants:

  sign          phi(q) = 1
  wilcoxon      phi(q) = q
  normal        phi(q) = Phi^{-1}((1+q)/2)   (normal scores)
  redescending  phi(q) = sum_{l=m_lo}^{m_hi} (l/m) C(m,l) q^{l-1} (1-q)^{m-l}

with redescending defaults (m, m_lo, m_hi) = (20, 12, 19).  All integrals
are closed forms:

  * normal scores via the substitution q = 2 Phi(z) - 1, which gives
    int phi = 2(pdf(z_lo) - pdf(z_hi)) and
    int phi^2 = 2[(sf(z_lo) - sf(z_hi)) - (z_hi pdf(z_hi) - z_lo pdf(z_lo))]
    where z(q) = Phi^{-1}((1+q)/2);
  * redescending term-wise through the integer incomplete beta identity
    int_0^x q^{a-1}(1-q)^{b-1} dq = B(a,b) P(Bin(a+b-1, x) >= a),
    the binomial sum being exact-coefficient arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._normal import norm_isf, norm_pdf, norm_ppf, norm_sf
from .errors import ConfigError

KINDS = ("sign", "wilcoxon", "normal", "redescending")


def _binom_tail(n: int, a: int, x: float) -> float:
    """P(Bin(n, x) >= a) with exact integer binomial coefficients."""
    if a <= 0:
        return 1.0
    if a > n:
        return 0.0
    return float(sum(math.comb(n, j) * x ** j * (1.0 - x) ** (n - j)
                     for j in range(a, n + 1)))


@lru_cache(maxsize=None)
def _red_terms(m: int, m_lo: int, m_hi: int):
    """(l, coefficient (l/m)C(m,l)) pairs for the redescending polynomial."""
    return tuple((l, l / m * math.comb(m, l)) for l in range(m_lo, m_hi + 1))


@lru_cache(maxsize=None)
def _red_sq_terms(m: int, m_lo: int, m_hi: int):
    """Terms of phi_red^2 grouped as (a, weight) with a = l + l' - 1.

    phi^2 expands into products q^{l+l'-2}(1-q)^{2m-l-l'}; each integrates
    to weight/B-normalisation B(a, b)*P(Bin(2m-1, x) >= a) with
    a = l+l'-1, b = 2m-l-l'+1.  B(a,b) is exact rational here.
    """
    acc: dict[int, float] = {}
    for l in range(m_lo, m_hi + 1):
        for lp in range(m_lo, m_hi + 1):
            a = l + lp - 1
            coef = (l * lp) / (m * m) * math.comb(m, l) * math.comb(m, lp)
            acc[a] = acc.get(a, 0.0) + coef
    out = []
    n = 2 * m - 1
    for a, coef in sorted(acc.items()):
        b = n - a + 1
        beta = math.factorial(a - 1) * math.factorial(b - 1) / math.factorial(n)
        out.append((a, coef * beta))
    return tuple(out)


@dataclass(frozen=True)
class ScoreFunction:
    """One of the four score variants, selected by ``kind``.

    m, m_lo, m_hi only matter for kind="redescending" (1 <= m_lo <= m_hi <= m).
    """

    kind: str
    m: int = 20
    m_lo: int = 12
    m_hi: int = 19

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown score kind {self.kind!r}; "
                              f"expected one of {KINDS}")
        if self.kind == "redescending":
            if not (1 <= self.m_lo <= self.m_hi <= self.m):
                raise ConfigError(
                    "redescending parameters need 1 <= m_lo <= m_hi <= m, "
                    f"got ({self.m}, {self.m_lo}, {self.m_hi})")

    # -- evaluation -----------------------------------------------------

    def evaluate(self, q):
        """phi(q) for scalar or array q, q in the open interval (0,1)."""
        q_arr = np.asarray(q, dtype=float)
        if np.any(q_arr <= 0.0) or np.any(q_arr >= 1.0):
            raise ValueError("score argument must lie in (0, 1)")
        if self.kind == "sign":
            out = np.ones_like(q_arr)
        elif self.kind == "wilcoxon":
            out = q_arr.copy()
        elif self.kind == "normal":
            out = norm_ppf((1.0 + q_arr) / 2.0)
        else:
            out = self._red_poly(q_arr, 1.0 - q_arr)
        if np.isscalar(q) or q_arr.ndim == 0:
            return float(out)
        return out

    def evaluate_complement(self, eps):
        """phi(1 - eps) for eps in (0, 1], accurate for very small eps.

        The deep-tail design-sensitivity integrals work with the survival
        mass eps = 1 - q directly; forming 1 - eps in floating point first
        would round q to 1 for eps below 1e-16.
        """
        if isinstance(eps, (float, int)):
            if not 0.0 < eps <= 1.0:
                raise ValueError("complement argument must lie in (0, 1]")
            if self.kind == "sign":
                return 1.0
            if self.kind == "wilcoxon":
                return 1.0 - eps
            if self.kind == "normal":
                return float(norm_isf(eps / 2.0))
            q, e_ = 1.0 - eps, float(eps)
            return float(sum(coef * q ** (l - 1) * e_ ** (self.m - l)
                             for l, coef in _red_terms(self.m, self.m_lo, self.m_hi)))
        e = np.asarray(eps, dtype=float)
        if np.any(e <= 0.0) or np.any(e > 1.0):
            raise ValueError("complement argument must lie in (0, 1]")
        if self.kind == "sign":
            out = np.ones_like(e)
        elif self.kind == "wilcoxon":
            out = 1.0 - e
        elif self.kind == "normal":
            out = norm_isf(e / 2.0)
        else:
            out = self._red_poly(1.0 - e, e)
        if np.isscalar(eps) or e.ndim == 0:
            return float(out)
        return out

    def _red_poly(self, q, one_minus_q):
        out = np.zeros_like(np.asarray(q, dtype=float))
        for l, coef in _red_terms(self.m, self.m_lo, self.m_hi):
            out = out + coef * q ** (l - 1) * one_minus_q ** (self.m - l)
        return out

    # -- integrals ------------------------------------------------------

    def integral(self, lo: float, hi: float) -> float:
        """int_lo^hi phi(q) dq, closed form, 0 <= lo <= hi <= 1."""
        self._check_bounds(lo, hi)
        if self.kind == "sign":
            return hi - lo
        if self.kind == "wilcoxon":
            return 0.5 * (hi * hi - lo * lo)
        if self.kind == "normal":
            return 2.0 * (norm_pdf(_ns_z(lo)) - norm_pdf(_ns_z(hi)))
        total = 0.0
        for l, _coef in _red_terms(self.m, self.m_lo, self.m_hi):
            total += (_binom_tail(self.m, l, hi)
                      - _binom_tail(self.m, l, lo)) / self.m
        return total

    def integral_sq(self, lo: float, hi: float) -> float:
        """int_lo^hi phi(q)^2 dq, closed form."""
        self._check_bounds(lo, hi)
        if self.kind == "sign":
            return hi - lo
        if self.kind == "wilcoxon":
            return (hi ** 3 - lo ** 3) / 3.0
        if self.kind == "normal":
            z_lo, z_hi = _ns_z(lo), _ns_z(hi)
            top = 0.0 if math.isinf(z_hi) else z_hi * norm_pdf(z_hi)
            bot = z_lo * norm_pdf(z_lo)
            return 2.0 * ((norm_sf(z_lo) - norm_sf(z_hi)) - (top - bot))
        total = 0.0
        n = 2 * self.m - 1
        for a, weight in _red_sq_terms(self.m, self.m_lo, self.m_hi):
            total += weight * (_binom_tail(n, a, hi) - _binom_tail(n, a, lo))
        return total

    def tail_integral(self, x: float) -> float:
        """int_{1-x}^1 phi(q) dq computed from x directly.

        Forming 1-x first would round to 1 for x below 1e-16; the deep
        truncation levels of the design-sensitivity sup need this down to
        x ~ 1e-200.  Redescending uses the v = 1-q substitution, turning
        each term into a small binomial tail P(Bin(m, x) >= m-l+1) with
        no cancellation.
        """
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"need x in [0,1], got {x}")
        if self.kind == "sign":
            return x
        if self.kind == "wilcoxon":
            return x - 0.5 * x * x
        if self.kind == "normal":
            if x == 0.0:
                return 0.0
            return 2.0 * norm_pdf(norm_isf(x / 2.0))
        total = 0.0
        for l, _coef in _red_terms(self.m, self.m_lo, self.m_hi):
            total += _binom_tail(self.m, self.m - l + 1, x) / self.m
        return total

    def tail_integral_sq(self, x: float) -> float:
        """int_{1-x}^1 phi(q)^2 dq from the complement side, as tail_integral."""
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"need x in [0,1], got {x}")
        if self.kind == "sign":
            return x
        if self.kind == "wilcoxon":
            return x - x * x + x ** 3 / 3.0
        if self.kind == "normal":
            if x == 0.0:
                return 0.0
            z = norm_isf(x / 2.0)
            return 2.0 * (norm_sf(z) + z * norm_pdf(z))
        total = 0.0
        n = 2 * self.m - 1
        for a, weight in _red_sq_terms(self.m, self.m_lo, self.m_hi):
            total += weight * _binom_tail(n, n - a + 1, x)
        return total

    @staticmethod
    def _check_bounds(lo: float, hi: float) -> None:
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValueError(f"need 0 <= lo <= hi <= 1, got [{lo}, {hi}]")

    def spec_string(self) -> str:
        if self.kind == "redescending" and (self.m, self.m_lo, self.m_hi) != (20, 12, 19):
            return f"redescending:{self.m},{self.m_lo},{self.m_hi}"
        return self.kind


def _ns_z(q: float) -> float:
    """z(q) = Phi^{-1}((1+q)/2) for q in [0,1], via the survival side."""
    if q >= 1.0:
        return math.inf
    return float(norm_isf((1.0 - q) / 2.0))


@dataclass(frozen=True)
class TruncatedScore:
    """phi_x(q) = phi(q) 1{q >= 1-x}: the base score zeroed below 1-x."""

    base: ScoreFunction
    x: float

    def __post_init__(self):
        if not (0.0 < self.x <= 1.0):
            raise ConfigError(f"truncation level must be in (0,1], got {self.x}")

    def evaluate(self, q):
        q_arr = np.asarray(q, dtype=float)
        vals = self.base.evaluate(q_arr)
        out = np.where(q_arr >= 1.0 - self.x, vals, 0.0)
        if np.isscalar(q) or q_arr.ndim == 0:
            return float(out)
        return out

    def integral(self, lo: float, hi: float) -> float:
        cut = max(lo, 1.0 - self.x)
        if hi <= cut:
            return 0.0
        return self.base.integral(cut, hi)

    def integral_sq(self, lo: float, hi: float) -> float:
        cut = max(lo, 1.0 - self.x)
        if hi <= cut:
            return 0.0
        return self.base.integral_sq(cut, hi)


def parse_score(spec: str) -> ScoreFunction:
    """Parse a CLI score spec: sign | wilcoxon | normal | redescending[:m,mlo,mhi]."""
    text = spec.strip().lower()
    if ":" not in text:
        return ScoreFunction(text)
    head, _, params = text.partition(":")
    if head != "redescending":
        raise ConfigError(f"score {head!r} takes no parameters")
    parts = params.split(",")
    if len(parts) != 3:
        raise ConfigError(
            f"redescending takes three parameters m,mlo,mhi; got {params!r}")
    try:
        m, m_lo, m_hi = (int(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"bad redescending parameters {params!r}") from exc
    return ScoreFunction("redescending", m=m, m_lo=m_lo, m_hi=m_hi)


def rank_scores(score: ScoreFunction, n: int) -> np.ndarray:
    """c_i = phi(i/(n+1)) for i = 1..n as a float array."""
    ranks = np.arange(1, n + 1, dtype=float)
    return np.asarray(score.evaluate(ranks / (n + 1)), dtype=float)
