"""Macroscopic density profiles on [0,1] and their regularity class.

A profile is a function u0: [0,1] -> (0,1) pinned to the reservoir density
at both ends, u0(0) = u0(1) = rho.  Profiles carry two class parameters:

* ``eps0``  -- values stay inside [eps0, 1-eps0],
* ``kappa`` -- the slope never exceeds kappa in absolute value.

Three families are supported: the constant profile, finite mixtures of sine
modes ``rho + sum_k a_k sin(pi k x)``, and tabulated values interpolated
piecewise-linearly.  Class membership is validated on a dense grid at
construction time; for tabulated profiles kappa defaults to the maximum
slope of the interpolant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

VALIDATION_GRID = 4097
_CLASS_SLACK = 1e-12


class ProfileError(ValueError):
    """Profile violates its declared regularity class."""


@dataclass(frozen=True)
class ProfileSpec:
    """A boundary-pinned density profile together with its class parameters.

    Use the constructors :meth:`constant`, :meth:`sine`, :meth:`sine_mixture`
    or :meth:`tabulated` instead of instantiating directly.
    """

    kind: str
    rho: float
    eps0: float
    kappa: float
    modes: tuple[tuple[int, float], ...] = ()
    xs: tuple[float, ...] = ()
    ys: tuple[float, ...] = ()

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, rho: float, eps0: float | None = None,
                 kappa: float | None = None) -> "ProfileSpec":
        """The flat profile u0 = rho (the stationary density)."""
        return cls._build("constant", rho, (), (), (), eps0, kappa)

    @classmethod
    def sine(cls, rho: float, amplitude: float, mode: int = 1,
             eps0: float | None = None, kappa: float | None = None) -> "ProfileSpec":
        """u0(x) = rho + amplitude * sin(pi * mode * x)."""
        return cls.sine_mixture(rho, [(mode, amplitude)], eps0, kappa)

    @classmethod
    def sine_mixture(cls, rho: float, modes: Iterable[tuple[int, float]],
                     eps0: float | None = None,
                     kappa: float | None = None) -> "ProfileSpec":
        """u0(x) = rho + sum over (k, a_k) of a_k sin(pi k x)."""
        cleaned = []
        for k, a in modes:
            k = int(k)
            if k < 1:
                raise ProfileError(f"sine mode index must be >= 1, got {k}")
            cleaned.append((k, float(a)))
        cleaned.sort()
        return cls._build("sine", rho, tuple(cleaned), (), (), eps0, kappa)

    @classmethod
    def tabulated(cls, xs: Sequence[float], ys: Sequence[float],
                  eps0: float | None = None,
                  kappa: float | None = None) -> "ProfileSpec":
        """Piecewise-linear profile through the points (xs, ys).

        xs must start at 0 and end at 1; ys[0] == ys[-1] defines rho.
        """
        xs = tuple(float(v) for v in xs)
        ys = tuple(float(v) for v in ys)
        if len(xs) != len(ys) or len(xs) < 2:
            raise ProfileError("tabulated profile needs matching xs/ys with >= 2 points")
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise ProfileError("tabulated xs must span [0, 1] exactly")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ProfileError("tabulated xs must be strictly increasing")
        if abs(ys[0] - ys[-1]) > _CLASS_SLACK:
            raise ProfileError("tabulated profile must take the same value at 0 and 1")
        return cls._build("tabulated", ys[0], (), xs, ys, eps0, kappa)

    @classmethod
    def _build(cls, kind, rho, modes, xs, ys, eps0, kappa) -> "ProfileSpec":
        rho = float(rho)
        if not 0.0 < rho < 1.0:
            raise ProfileError(f"rho must lie in (0,1), got {rho}")
        grid = np.linspace(0.0, 1.0, VALIDATION_GRID)
        vals = _evaluate(kind, rho, modes, xs, ys, grid)
        if eps0 is None:
            margin = min(vals.min(), 1.0 - vals.max())
            if margin <= 0.0:
                raise ProfileError("profile values must stay strictly inside (0,1)")
            eps0 = min(margin, rho, 1.0 - rho)
        if kappa is None:
            kappa = _derive_kappa(kind, modes, xs, ys)
        return cls(kind=kind, rho=rho, eps0=float(eps0), kappa=float(kappa),
                   modes=modes, xs=xs, ys=ys)

    # -- validation --------------------------------------------------------

    def __post_init__(self):
        if self.kind not in ("constant", "sine", "tabulated"):
            raise ProfileError(f"unknown profile kind {self.kind!r}")
        if not 0.0 < self.rho < 1.0:
            raise ProfileError(f"rho must lie in (0,1), got {self.rho}")
        if not 0.0 < self.eps0 <= min(self.rho, 1.0 - self.rho) + _CLASS_SLACK:
            raise ProfileError(
                f"eps0 must lie in (0, min(rho, 1-rho)], got {self.eps0}")
        if not self.kappa > 0.0:
            raise ProfileError(f"kappa must be positive, got {self.kappa}")
        grid = np.linspace(0.0, 1.0, VALIDATION_GRID)
        vals = self.evaluate(grid)
        if abs(vals[0] - self.rho) > _CLASS_SLACK or abs(vals[-1] - self.rho) > _CLASS_SLACK:
            raise ProfileError("profile must equal rho at both endpoints")
        lo, hi = vals.min(), vals.max()
        if lo < self.eps0 - _CLASS_SLACK or hi > 1.0 - self.eps0 + _CLASS_SLACK:
            raise ProfileError(
                f"profile leaves [eps0, 1-eps0]: range [{lo:.6g}, {hi:.6g}], eps0={self.eps0}")
        slope = np.abs(self.derivative(grid)).max()
        if slope > self.kappa * (1.0 + 1e-9) + _CLASS_SLACK:
            raise ProfileError(
                f"profile slope {slope:.6g} exceeds declared kappa={self.kappa}")

    # -- evaluation --------------------------------------------------------

    def evaluate(self, x) -> np.ndarray:
        """Profile values u0(x) for x in [0,1] (vectorized)."""
        return _evaluate(self.kind, self.rho, self.modes, self.xs, self.ys, x)

    def derivative(self, x) -> np.ndarray:
        """Slope u0'(x); for tabulated profiles, the slope of the segment."""
        return _derivative(self.kind, self.modes, self.xs, self.ys, x)

    def values_on_lattice(self, n: int) -> np.ndarray:
        """Samples u0(x/n) for x = 0..n, endpoints pinned exactly to rho."""
        if n < 2:
            raise ProfileError(f"lattice parameter n must be >= 2, got {n}")
        vals = self.evaluate(np.arange(n + 1) / n)
        vals[0] = vals[-1] = self.rho
        return vals


def _evaluate(kind, rho, modes, xs, ys, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if kind == "constant":
        return np.full_like(x, rho)
    if kind == "sine":
        out = np.full_like(x, rho)
        for k, a in modes:
            out += a * np.sin(np.pi * k * x)
        return out
    return np.interp(x, xs, ys)


def _derivative(kind, modes, xs, ys, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if kind == "constant":
        return np.zeros_like(x)
    if kind == "sine":
        out = np.zeros_like(x)
        for k, a in modes:
            out += a * np.pi * k * np.cos(np.pi * k * x)
        return out
    xs = np.asarray(xs)
    slopes = np.diff(ys) / np.diff(xs)
    seg = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, len(slopes) - 1)
    return slopes[seg]


def _derive_kappa(kind, modes, xs, ys) -> float:
    if kind == "constant":
        return 1.0
    if kind == "sine":
        # sum |a_k| pi k is an exact Lipschitz bound for the mixture
        return float(sum(abs(a) * np.pi * k for k, a in modes))
    slopes = np.abs(np.diff(ys) / np.diff(xs))
    return float(max(slopes.max(), 1e-12))
