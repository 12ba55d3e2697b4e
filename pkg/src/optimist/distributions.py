"""Parametric and empirical outcome laws with exact tail formulas.

Every law is an immutable dataclass exposing ``cdf``, ``pdf``,
``quantile``, ``mean``, ``support`` and ``sample``, plus a closed-form
upper-tail average (``closed_form_superquantile``) for the families
that admit one.  Parameters are validated once, at construction, so
evaluation never re-checks them.  All operations are pure functions of
their arguments; instances are safe to share across threads.

Sampling is inverse-transform over a seeded PCG64 uniform stream, so a
fixed ``(seed, n, law)`` triple reproduces the same draws bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import special

__all__ = [
    "DomainError",
    "NumericError",
    "NumericWarning",
    "ZeroMeanWarning",
    "Distribution",
    "Normal",
    "Logistic",
    "StudentT",
    "Pareto",
    "GPD",
    "GEV",
    "Triangular",
    "Degenerate",
    "Empirical",
    "AffineTransform",
]


class DomainError(ValueError):
    """Argument or parameter outside an operation's domain."""


class NumericError(RuntimeError):
    """A numerical routine exhausted its budget before converging.

    ``best_estimate`` carries the value accumulated so far, when one
    exists, so callers can decide whether it is still usable.
    """

    def __init__(self, message: str, best_estimate: float | None = None):
        super().__init__(message)
        self.best_estimate = best_estimate


class NumericWarning(UserWarning):
    """An analytic value and its numerical cross-check disagree."""


class ZeroMeanWarning(UserWarning):
    """A shock meant to be centered has a visibly nonzero mean."""


_SQRT_2PI = math.sqrt(2.0 * math.pi)
# keeps inverse-transform draws strictly inside (0, 1)
_U_CLIP = 2.0 ** -53
# smallest upper-tail mass the quantile substitution is asked to resolve
_Q_FLOOR = np.finfo(float).tiny


def _scalarize(x, out):
    out = np.asarray(out, dtype=float)
    return float(out) if np.ndim(x) == 0 else out


def _check_prob_open(alpha) -> None:
    a = np.asarray(alpha, dtype=float)
    if np.any(~np.isfinite(a)) or np.any(a <= 0.0) or np.any(a >= 1.0):
        raise DomainError("alpha must lie in (0,1)")


def _check_positive(value: float, name: str) -> float:
    v = float(value)
    if not math.isfinite(v) or v <= 0.0:
        raise DomainError(f"{name} must be positive")
    return v


def _check_finite(value: float, name: str) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite")
    return v


def _std_normal_pdf(z):
    return np.exp(-0.5 * np.square(z)) / _SQRT_2PI


class Distribution:
    """Interface shared by every outcome law."""

    is_continuous: bool = True

    def cdf(self, x):
        raise NotImplementedError

    def cdf_left(self, x):
        """P(X < x); differs from ``cdf`` only at atoms."""
        return self.cdf(x)

    def pdf(self, x):
        raise NotImplementedError

    def quantile(self, alpha):
        """Left-continuous inverse of the cdf, defined on (0, 1)."""
        raise NotImplementedError

    def isf(self, q):
        """Upper-tail quantile: the value exceeded with probability ``q``.

        Equals ``quantile(1 - q)`` but is computed from ``q`` directly,
        so tail masses near machine precision do not cancel away.
        """
        return self.quantile(1.0 - np.asarray(q, dtype=float))

    def mean(self) -> float:
        raise NotImplementedError

    def support(self) -> tuple[float, float]:
        """Closure of the support, as ``(lo, hi)``; entries may be infinite."""
        raise NotImplementedError

    def closed_form_superquantile(self, alpha, paper_variant_pareto: bool = False):
        """Exact upper-tail average where the family admits one, else None.

        ``paper_variant_pareto`` switches the Pareto family to a known
        misprinted factor kept only for replication audits; every other
        family ignores it.
        """
        return None

    def sample(self, n: int, seed: int):
        """``n`` inverse-transform draws from a PCG64 stream seeded with ``seed``."""
        n = int(n)
        if n < 1:
            raise DomainError("sample size must be at least 1")
        rng = np.random.Generator(np.random.PCG64(int(seed)))
        u = rng.random(n)
        np.clip(u, _U_CLIP, 1.0 - _U_CLIP, out=u)
        return self.quantile(u)


@dataclass(frozen=True)
class Normal(Distribution):
    """Gaussian law with location ``loc`` and scale ``scale``."""

    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        _check_finite(self.loc, "loc")
        _check_positive(self.scale, "scale")

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.loc) / self.scale
        return _scalarize(x, special.ndtr(z))

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.loc) / self.scale
        return _scalarize(x, _std_normal_pdf(z) / self.scale)

    def quantile(self, alpha):
        _check_prob_open(alpha)
        z = special.ndtri(np.asarray(alpha, dtype=float))
        return _scalarize(alpha, self.loc + self.scale * z)

    def isf(self, q):
        z = special.ndtri(np.asarray(q, dtype=float))
        return _scalarize(q, self.loc - self.scale * z)

    def mean(self) -> float:
        return self.loc

    def support(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    def closed_form_superquantile(self, alpha, paper_variant_pareto: bool = False):
        a = float(alpha)
        if a == 0.0:
            return self.mean()
        z = special.ndtri(a)
        return self.loc + self.scale * float(_std_normal_pdf(z)) / (1.0 - a)


@dataclass(frozen=True)
class Logistic(Distribution):
    """Logistic law with location ``loc`` and scale ``scale``."""

    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        _check_finite(self.loc, "loc")
        _check_positive(self.scale, "scale")

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.loc) / self.scale
        return _scalarize(x, special.expit(z))

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.loc) / self.scale
        p = special.expit(z)
        return _scalarize(x, p * (1.0 - p) / self.scale)

    def quantile(self, alpha):
        _check_prob_open(alpha)
        a = np.asarray(alpha, dtype=float)
        return _scalarize(alpha, self.loc + self.scale * (np.log(a) - np.log1p(-a)))

    def isf(self, q):
        qq = np.asarray(q, dtype=float)
        return _scalarize(q, self.loc + self.scale * (np.log1p(-qq) - np.log(qq)))

    def mean(self) -> float:
        return self.loc

    def support(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    def closed_form_superquantile(self, alpha, paper_variant_pareto: bool = False):
        a = float(alpha)
        if a == 0.0:
            return self.mean()
        # binary entropy of the tail split
        h = -(a * math.log(a) + (1.0 - a) * math.log1p(-a))
        return self.loc + self.scale * h / (1.0 - a)


@dataclass(frozen=True)
class StudentT(Distribution):
    """Student-t law; ``df`` must exceed 1 so the mean exists."""

    df: float
    scale: float = 1.0
    loc: float = 0.0

    def __post_init__(self):
        if not math.isfinite(float(self.df)) or float(self.df) <= 1.0:
            raise DomainError("df must exceed 1")
        _check_positive(self.scale, "scale")
        _check_finite(self.loc, "loc")

    @cached_property
    def _log_norm(self) -> float:
        # log of the standardized-t normalizing constant
        return float(
            special.gammaln((self.df + 1.0) / 2.0)
            - special.gammaln(self.df / 2.0)
            - 0.5 * math.log(self.df * math.pi)
        )

    def _std_pdf(self, z):
        z = np.asarray(z, dtype=float)
        return np.exp(self._log_norm - 0.5 * (self.df + 1.0) * np.log1p(z * z / self.df))

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.loc) / self.scale
        return _scalarize(x, special.stdtr(self.df, z))

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.loc) / self.scale
        return _scalarize(x, self._std_pdf(z) / self.scale)

    def quantile(self, alpha):
        _check_prob_open(alpha)
        z = special.stdtrit(self.df, np.asarray(alpha, dtype=float))
        return _scalarize(alpha, self.loc + self.scale * z)

    def isf(self, q):
        z = special.stdtrit(self.df, np.asarray(q, dtype=float))
        return _scalarize(q, self.loc - self.scale * z)

    def mean(self) -> float:
        return self.loc

    def support(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    def closed_form_superquantile(self, alpha, paper_variant_pareto: bool = False):
        a = float(alpha)
        if a == 0.0:
            return self.mean()
        t = float(special.stdtrit(self.df, a))
        tail = (self.df + t * t) / ((self.df - 1.0) * (1.0 - a))
        return self.loc + self.scale * tail * float(self._std_pdf(t))


@dataclass(frozen=True)
class Pareto(Distribution):
    """Pareto law on [scale, inf); ``shape`` must exceed 1 so the mean exists."""

    scale: float
    shape: float

    def __post_init__(self):
        _check_positive(self.scale, "scale")
        if not math.isfinite(float(self.shape)) or float(self.shape) <= 1.0:
            raise DomainError("shape must exceed 1")

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        safe = np.maximum(x, self.scale)
        out = np.where(x < self.scale, 0.0, 1.0 - (self.scale / safe) ** self.shape)
        return _scalarize(x, out)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        safe = np.maximum(x, self.scale)
        dens = self.shape * self.scale ** self.shape * safe ** (-self.shape - 1.0)
        return _scalarize(x, np.where(x < self.scale, 0.0, dens))

    def quantile(self, alpha):
        _check_prob_open(alpha)
        a = np.asarray(alpha, dtype=float)
        return _scalarize(alpha, self.scale * (1.0 - a) ** (-1.0 / self.shape))

    def isf(self, q):
        qq = np.asarray(q, dtype=float)
        return _scalarize(q, self.scale * qq ** (-1.0 / self.shape))

    def mean(self) -> float:
        return self.scale * self.shape / (self.shape - 1.0)

    def support(self) -> tuple[float, float]:
        return (self.scale, math.inf)

    def closed_form_superquantile(self, alpha, paper_variant_pareto: bool = False):
        a = float(alpha)
        q = self.scale * (1.0 - a) ** (-1.0 / self.shape)
        if paper_variant_pareto:
            # misprinted factor, kept only so replication audits can see it
            return (1.0 - 1.0 / self.shape) * q
        return q * self.shape / (self.shape - 1.0)


@dataclass(frozen=True)
class GPD(Distribution):
    """Generalized Pareto law anchored at 0.

    ``shape`` must be nonzero and below 1 so the mean exists; negative
    shapes give the bounded support [0, -scale/shape].
    """

    shape: float
    scale: float

    def __post_init__(self):
        xi = float(self.shape)
        if not math.isfinite(xi) or xi == 0.0 or xi >= 1.0:
            raise DomainError("shape must be nonzero and less than 1")
        _check_positive(self.scale, "scale")

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        t = 1.0 + self.shape * x / self.scale
        t = np.maximum(t, 0.0)
        inside = np.where(t > 0.0, 1.0 - t ** (-1.0 / self.shape), 1.0)
        return _scalarize(x, np.where(x < 0.0, 0.0, inside))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        t = 1.0 + self.shape * x / self.scale
        ok = (x >= 0.0) & (t > 0.0)
        t = np.where(ok, t, 1.0)
        dens = t ** (-1.0 / self.shape - 1.0) / self.scale
        return _scalarize(x, np.where(ok, dens, 0.0))

    def quantile(self, alpha):
        _check_prob_open(alpha)
        a = np.asarray(alpha, dtype=float)
        out = (self.scale / self.shape) * ((1.0 - a) ** (-self.shape) - 1.0)
        return _scalarize(alpha, out)

    def isf(self, q):
        qq = np.asarray(q, dtype=float)
        return _scalarize(q, (self.scale / self.shape) * (qq ** (-self.shape) - 1.0))

    def mean(self) -> float:
        return self.scale / (1.0 - self.shape)

    def support(self) -> tuple[float, float]:
        if self.shape > 0.0:
            return (0.0, math.inf)
        return (0.0, -self.scale / self.shape)

    def closed_form_superquantile(self, alpha, paper_variant_pareto: bool = False):
        a = float(alpha)
        q = (self.scale / self.shape) * ((1.0 - a) ** (-self.shape) - 1.0)
        return (q + self.scale) / (1.0 - self.shape)


@dataclass(frozen=True)
class GEV(Distribution):
    """Generalized extreme value law.

    ``shape`` must be nonzero and below 1 so the mean exists; positive
    shapes are bounded below, negative shapes bounded above.
    """

    loc: float
    scale: float
    shape: float

    def __post_init__(self):
        _check_finite(self.loc, "loc")
        _check_positive(self.scale, "scale")
        xi = float(self.shape)
        if not math.isfinite(xi) or xi == 0.0 or xi >= 1.0:
            raise DomainError("shape must be nonzero and less than 1")

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        t = 1.0 + self.shape * (x - self.loc) / self.scale
        ok = t > 0.0
        t = np.where(ok, t, 1.0)
        inside = np.exp(-(t ** (-1.0 / self.shape)))
        outside = 0.0 if self.shape > 0.0 else 1.0
        return _scalarize(x, np.where(ok, inside, outside))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        t = 1.0 + self.shape * (x - self.loc) / self.scale
        ok = t > 0.0
        t = np.where(ok, t, 1.0)
        tau = t ** (-1.0 / self.shape)
        dens = tau ** (self.shape + 1.0) * np.exp(-tau) / self.scale
        return _scalarize(x, np.where(ok, dens, 0.0))

    def quantile(self, alpha):
        _check_prob_open(alpha)
        a = np.asarray(alpha, dtype=float)
        out = self.loc + (self.scale / self.shape) * ((-np.log(a)) ** (-self.shape) - 1.0)
        return _scalarize(alpha, out)

    def isf(self, q):
        qq = np.asarray(q, dtype=float)
        # -log(1-q) evaluated without cancellation for small q
        out = self.loc + (self.scale / self.shape) * ((-np.log1p(-qq)) ** (-self.shape) - 1.0)
        return _scalarize(q, out)

    def mean(self) -> float:
        return self.loc + self.scale * (float(special.gamma(1.0 - self.shape)) - 1.0) / self.shape

    def support(self) -> tuple[float, float]:
        edge = self.loc - self.scale / self.shape
        if self.shape > 0.0:
            return (edge, math.inf)
        return (-math.inf, edge)

    def closed_form_superquantile(self, alpha, paper_variant_pareto: bool = False):
        a = float(alpha)
        if a == 0.0:
            return self.mean()
        # lower incomplete gamma of the exponent 1 - shape, cut at -log(alpha)
        partial = float(special.gamma(1.0 - self.shape)) * float(
            special.gammainc(1.0 - self.shape, -math.log(a))
        )
        return self.loc + self.scale * (partial - (1.0 - a)) / (self.shape * (1.0 - a))


@dataclass(frozen=True)
class Triangular(Distribution):
    """Triangular law on [lower, upper] with mode ``mode``."""

    lower: float
    mode: float
    upper: float

    def __post_init__(self):
        a = _check_finite(self.lower, "lower")
        c = _check_finite(self.mode, "mode")
        b = _check_finite(self.upper, "upper")
        if not (a <= c <= b) or a >= b:
            raise DomainError("need lower <= mode <= upper with lower < upper")

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        a, c, b = self.lower, self.mode, self.upper
        width = b - a
        rising = np.square(x - a) / (width * (c - a)) if c > a else np.ones_like(x)
        falling = 1.0 - np.square(b - x) / (width * (b - c)) if b > c else np.ones_like(x)
        out = np.select(
            [x <= a, x <= c, x < b],
            [0.0, rising, falling],
            default=1.0,
        )
        return _scalarize(x, out)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        a, c, b = self.lower, self.mode, self.upper
        width = b - a
        rising = 2.0 * (x - a) / (width * (c - a)) if c > a else np.zeros_like(x)
        falling = 2.0 * (b - x) / (width * (b - c)) if b > c else np.zeros_like(x)
        out = np.select(
            [(x < a) | (x > b), x < c],
            [0.0, rising],
            default=falling,
        )
        return _scalarize(x, out)

    def quantile(self, alpha):
        _check_prob_open(alpha)
        a = np.asarray(alpha, dtype=float)
        lo, c, hi = self.lower, self.mode, self.upper
        width = hi - lo
        split = (c - lo) / width
        low = lo + np.sqrt(a * width * (c - lo))
        high = hi - np.sqrt((1.0 - a) * width * (hi - c))
        return _scalarize(alpha, np.where(a <= split, low, high))

    def isf(self, q):
        qq = np.asarray(q, dtype=float)
        lo, c, hi = self.lower, self.mode, self.upper
        width = hi - lo
        split = (hi - c) / width
        high = hi - np.sqrt(qq * width * (hi - c))
        low = lo + np.sqrt((1.0 - qq) * width * (c - lo))
        return _scalarize(q, np.where(qq <= split, high, low))

    def mean(self) -> float:
        return (self.lower + self.mode + self.upper) / 3.0

    def support(self) -> tuple[float, float]:
        return (self.lower, self.upper)


@dataclass(frozen=True)
class Degenerate(Distribution):
    """Point mass at ``value``."""

    value: float
    is_continuous = False

    def __post_init__(self):
        _check_finite(self.value, "value")

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _scalarize(x, np.where(x >= self.value, 1.0, 0.0))

    def cdf_left(self, x):
        x = np.asarray(x, dtype=float)
        return _scalarize(x, np.where(x > self.value, 1.0, 0.0))

    def pdf(self, x):
        raise DomainError("a point mass has no density")

    def quantile(self, alpha):
        _check_prob_open(alpha)
        a = np.asarray(alpha, dtype=float)
        return _scalarize(alpha, np.full_like(a, self.value))

    def isf(self, q):
        qq = np.asarray(q, dtype=float)
        return _scalarize(q, np.full_like(qq, self.value))

    def mean(self) -> float:
        return self.value

    def support(self) -> tuple[float, float]:
        return (self.value, self.value)


@dataclass(frozen=True)
class Empirical(Distribution):
    """Equal-weight law on an observed sample.

    ``quantile`` is the left-continuous inverse: the k-th smallest
    observation with k = ceil(alpha * n).
    """

    values: tuple
    is_continuous = False

    def __post_init__(self):
        try:
            vals = tuple(float(v) for v in self.values)
        except (TypeError, ValueError) as exc:
            raise DomainError("values must be real numbers") from exc
        if len(vals) < 1:
            raise DomainError("needs at least one observation")
        if any(not math.isfinite(v) for v in vals):
            raise DomainError("values must be finite")
        object.__setattr__(self, "values", vals)

    @cached_property
    def _sorted(self):
        return np.sort(np.asarray(self.values, dtype=float))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        n = len(self.values)
        out = np.searchsorted(self._sorted, x, side="right") / n
        return _scalarize(x, out)

    def cdf_left(self, x):
        x = np.asarray(x, dtype=float)
        n = len(self.values)
        out = np.searchsorted(self._sorted, x, side="left") / n
        return _scalarize(x, out)

    def pdf(self, x):
        raise DomainError("an empirical law has no density")

    def quantile(self, alpha):
        _check_prob_open(alpha)
        a = np.asarray(alpha, dtype=float)
        n = len(self.values)
        # 1e-12 slack so grid probabilities hitting k/n exactly stay at k
        k = np.ceil(a * n - 1e-12).astype(int)
        k = np.clip(k, 1, n)
        return _scalarize(alpha, self._sorted[k - 1])

    def isf(self, q):
        qq = np.asarray(q, dtype=float)
        n = len(self.values)
        k = n - np.floor(qq * n + 1e-12).astype(int)
        k = np.clip(k, 1, n)
        return _scalarize(q, self._sorted[k - 1])

    def mean(self) -> float:
        return float(self._sorted.mean())

    def support(self) -> tuple[float, float]:
        return (float(self._sorted[0]), float(self._sorted[-1]))


@dataclass(frozen=True)
class AffineTransform(Distribution):
    """The law of ``scale * X + shift`` for ``X`` drawn from ``base``.

    Negative scales flip the tail: the cdf becomes the reflected
    survival function of the base and quantiles read the base at the
    mirrored probability.
    """

    base: Distribution
    scale: float
    shift: float

    def __post_init__(self):
        if not isinstance(self.base, Distribution):
            raise DomainError("base must be a distribution")
        s = _check_finite(self.scale, "scale")
        if s == 0.0:
            raise DomainError("scale must be nonzero")
        _check_finite(self.shift, "shift")

    @property
    def is_continuous(self) -> bool:  # type: ignore[override]
        return self.base.is_continuous

    def _z(self, x):
        return (np.asarray(x, dtype=float) - self.shift) / self.scale

    def cdf(self, x):
        z = self._z(x)
        if self.scale > 0.0:
            return _scalarize(x, self.base.cdf(z))
        return _scalarize(x, 1.0 - np.asarray(self.base.cdf_left(z), dtype=float))

    def cdf_left(self, x):
        z = self._z(x)
        if self.scale > 0.0:
            return _scalarize(x, self.base.cdf_left(z))
        return _scalarize(x, 1.0 - np.asarray(self.base.cdf(z), dtype=float))

    def pdf(self, x):
        z = self._z(x)
        out = np.asarray(self.base.pdf(z), dtype=float) / abs(self.scale)
        return _scalarize(x, out)

    def quantile(self, alpha):
        _check_prob_open(alpha)
        a = np.asarray(alpha, dtype=float)
        if self.scale > 0.0:
            q = self.base.quantile(a)
        else:
            q = self.base.quantile(1.0 - a)
        return _scalarize(alpha, self.scale * np.asarray(q, dtype=float) + self.shift)

    def isf(self, q):
        qq = np.asarray(q, dtype=float)
        if self.scale > 0.0:
            base = self.base.isf(qq)
        else:
            base = self.base.quantile(np.maximum(qq, _Q_FLOOR))
        return _scalarize(q, self.scale * np.asarray(base, dtype=float) + self.shift)

    def mean(self) -> float:
        return self.scale * self.base.mean() + self.shift

    def support(self) -> tuple[float, float]:
        lo, hi = self.base.support()
        a, b = self.scale * lo + self.shift, self.scale * hi + self.shift
        return (min(a, b), max(a, b))

    def closed_form_superquantile(self, alpha, paper_variant_pareto: bool = False):
        # a negative scale would need the lower-tail average of the base,
        # which no family exposes in closed form
        if self.scale < 0.0:
            return None
        inner = self.base.closed_form_superquantile(
            alpha, paper_variant_pareto=paper_variant_pareto
        )
        if inner is None:
            return None
        return self.scale * inner + self.shift
