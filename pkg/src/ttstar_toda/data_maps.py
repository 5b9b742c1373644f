"""Explicit maps between asymptotic data and monodromy-type data.

The radial Toda-type chain studied here is periodic with period n+1 and
anti-symmetric (v_i + v_{n-i} = 0), so a solution germ near x = 0 is
described by the reduced lists gamma, rho of length floor((n-1)/2) + 1.
Monodromy-side coordinates (m_i, log e_i) are reached through closed-form
Gamma-function products:

    X_k(v_0..v_n) = prod_{j=1..n} Gamma((v_k - v_{k+j} + 2j) / (2(n+1)))

    m_i     = -gamma_i / 2
    log e_i = rho_i + gamma_i log(n+1) + log X_{n-i}(-gamma) - log X_i(-gamma)

where the products are evaluated on the negated (equivalently reversed)
full extension of gamma.  Solutions smooth on all of 0 < x < infinity are
exactly those with log e_i = 0, which pins rho as a function of gamma
(`global_rho`).

The chart change (rho, m) -> (log e, m) is generated by

    F(rho, m) = -sum rho_i m_i + log(n+1) sum m_i^2
                + (n+1)/2 sum_{k=0..n} sum_{j=1..n}
                      psi_m2((m_{k-j} - m_k + j) / (n+1))

through m_i = -dF/drho_i and log e_i = -dF/dm_i, and the induced map of
charts preserves the pairing  -1/2 sum dgamma_i ^ drho_i
= sum dm_i ^ dlog e_i.  `verify_generating_function` and
`verify_symplectic` check both facts by central differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .special_functions import log_gamma, psi_m2

__all__ = [
    "GenericityError",
    "ShapeError",
    "AsymptoticData",
    "MonodromyData",
    "reduced_length",
    "expand_reduced",
    "expand_full",
    "check_genericity",
    "log_x_k",
    "x_k",
    "asymptotic_to_monodromy",
    "monodromy_to_asymptotic",
    "global_rho",
    "gen_fun_F",
    "verify_generating_function",
    "verify_symplectic",
    "GradientCheckReport",
    "SymplecticCheckReport",
]

DEFAULT_MARGIN = 1e-9


class GenericityError(ValueError):
    """A consecutive gap of the full data leaves the open interval (-2, 2)."""


class ShapeError(ValueError):
    """Reduced list has the wrong length for the given n."""


def reduced_length(n: int) -> int:
    """Number of independent entries for chain parameter n."""
    if n < 1:
        raise ShapeError(f"n must be a positive integer, got {n!r}")
    return (n - 1) // 2 + 1


def expand_reduced(n: int, values) -> list[float]:
    """Full anti-symmetric periodic extension of a reduced list.

    Odd n:  (v_0..v_k, -v_k..-v_0); even n inserts a forced 0 in the
    middle.  The result has length n+1 and satisfies v_i + v_{n-i} = 0.
    """
    values = [float(v) for v in values]
    if len(values) != reduced_length(n):
        raise ShapeError(
            f"reduced list for n={n} must have length {reduced_length(n)}, "
            f"got {len(values)}")
    mirror = [-v for v in reversed(values)]
    if n % 2 == 1:
        return values + mirror
    return values + [0.0] + mirror


def _gaps(full: list[float]) -> list[float]:
    # n+1 consecutive gaps of the periodic extension, wrap included
    return [full[(i + 1) % len(full)] - full[i] for i in range(len(full))]


def check_genericity(n: int, gamma, margin: float = DEFAULT_MARGIN) -> None:
    """Raise GenericityError unless all full gaps lie in (-2+margin, 2-margin)."""
    full = expand_reduced(n, gamma)
    for i, g in enumerate(_gaps(full)):
        if not (-2.0 + margin < g < 2.0 - margin):
            raise GenericityError(
                f"gap gamma_{(i + 1) % (n + 1)} - gamma_{i} = {g:.6g} "
                f"violates (-2, 2) with margin {margin:g}")


@dataclass(frozen=True)
class AsymptoticData:
    """Reduced coordinates (gamma_i, rho_i) of the x -> 0 expansion
    2 w_i = gamma_i log x + rho_i + o(1)."""

    n: int
    gamma: tuple[float, ...]
    rho: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(float(v) for v in self.gamma))
        object.__setattr__(self, "rho", tuple(float(v) for v in self.rho))
        L = reduced_length(self.n)
        if len(self.gamma) != L or len(self.rho) != L:
            raise ShapeError(f"gamma and rho must have length {L} for n={self.n}")

    def full_gamma(self) -> list[float]:
        return expand_reduced(self.n, self.gamma)

    def full_rho(self) -> list[float]:
        return expand_reduced(self.n, self.rho)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "gamma": list(self.gamma), "rho": list(self.rho)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "AsymptoticData":
        return cls(n=int(d["n"]), gamma=tuple(d["gamma"]), rho=tuple(d["rho"]))


@dataclass(frozen=True)
class MonodromyData:
    """Reduced eigenvalue-type data (m_i, log e_i) on the monodromy side."""

    n: int
    m: tuple[float, ...]
    log_e: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(float(v) for v in self.m))
        object.__setattr__(self, "log_e", tuple(float(v) for v in self.log_e))
        L = reduced_length(self.n)
        if len(self.m) != L or len(self.log_e) != L:
            raise ShapeError(f"m and log_e must have length {L} for n={self.n}")

    def full_m(self) -> list[float]:
        return expand_reduced(self.n, self.m)

    def full_log_e(self) -> list[float]:
        return expand_reduced(self.n, self.log_e)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "m": list(self.m), "log_e": list(self.log_e)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "MonodromyData":
        return cls(n=int(d["n"]), m=tuple(d["m"]), log_e=tuple(d["log_e"]))


def expand_full(data):
    """Full anti-symmetric extensions of both fields of a data object.

    Returns (full_gamma, full_rho) for AsymptoticData and (full_m,
    full_log_e) for MonodromyData.
    """
    if isinstance(data, AsymptoticData):
        return data.full_gamma(), data.full_rho()
    if isinstance(data, MonodromyData):
        return data.full_m(), data.full_log_e()
    raise TypeError(f"expected AsymptoticData or MonodromyData, got {type(data)!r}")


# ----------------------------------------------------------------------
# Gamma products
# ----------------------------------------------------------------------

def log_x_k(k: int, full_values, n: int) -> float:
    """log X_k = sum_{j=1..n} log Gamma((v_k - v_{k+j} + 2j) / (2(n+1)))."""
    N = n + 1
    full_values = list(full_values)
    if len(full_values) != N:
        raise ShapeError(f"full list must have length {N}, got {len(full_values)}")
    acc = 0.0
    for j in range(1, n + 1):
        arg = (full_values[k % N] - full_values[(k + j) % N] + 2.0 * j) / (2.0 * N)
        if arg <= 0.0:
            raise GenericityError(
                f"nonpositive Gamma argument {arg:.6g} in X_k at (k={k}, j={j})")
        acc += log_gamma(arg)
    return acc


def x_k(k: int, full_values, n: int) -> float:
    """The product X_k itself, computed as exp of a log-Gamma sum."""
    return math.exp(log_x_k(k, full_values, n))


def _log_ratio(n: int, gamma_reduced, i: int) -> float:
    """log X_{n-i} - log X_i on the negated full extension of gamma."""
    neg_full = [-v for v in expand_reduced(n, gamma_reduced)]
    return log_x_k(n - i, neg_full, n) - log_x_k(i, neg_full, n)


# ----------------------------------------------------------------------
# Data maps
# ----------------------------------------------------------------------

def asymptotic_to_monodromy(a: AsymptoticData,
                            margin: float = DEFAULT_MARGIN) -> MonodromyData:
    """Closed-form monodromy data of a local solution germ."""
    check_genericity(a.n, a.gamma, margin)
    ln_np1 = math.log(a.n + 1)
    m = [-0.5 * g for g in a.gamma]
    log_e = [a.rho[i] + a.gamma[i] * ln_np1 + _log_ratio(a.n, a.gamma, i)
             for i in range(len(a.gamma))]
    return MonodromyData(n=a.n, m=tuple(m), log_e=tuple(log_e))


def monodromy_to_asymptotic(md: MonodromyData,
                            margin: float = DEFAULT_MARGIN) -> AsymptoticData:
    """Exact inverse of `asymptotic_to_monodromy`."""
    gamma = [-2.0 * v for v in md.m]
    check_genericity(md.n, gamma, margin)
    ln_np1 = math.log(md.n + 1)
    rho = [md.log_e[i] - gamma[i] * ln_np1 - _log_ratio(md.n, gamma, i)
           for i in range(len(gamma))]
    return AsymptoticData(n=md.n, gamma=tuple(gamma), rho=tuple(rho))


def global_rho(n: int, gamma, margin: float = DEFAULT_MARGIN) -> list[float]:
    """The unique rho with log e_i = 0: the globally smooth solutions."""
    check_genericity(n, gamma, margin)
    ln_np1 = math.log(n + 1)
    return [-float(gamma[i]) * ln_np1 - _log_ratio(n, gamma, i)
            for i in range(reduced_length(n))]


# ----------------------------------------------------------------------
# Generating function
# ----------------------------------------------------------------------

def gen_fun_F(n: int, rho, m) -> float:
    """Generating function F(rho, m) of the (rho, m) -> (log e, m) change.

    The double sum runs over the full periodic anti-symmetric extension of
    m; every psi_m2 argument is positive exactly when the full m gaps lie
    in (-1, 1), the image of genericity under m = -gamma/2.
    """
    L = reduced_length(n)
    rho = [float(v) for v in rho]
    m = [float(v) for v in m]
    if len(rho) != L or len(m) != L:
        raise ShapeError(f"rho and m must have length {L} for n={n}")
    N = n + 1
    mf = expand_reduced(n, m)
    acc = -sum(rho[i] * m[i] for i in range(L))
    acc += math.log(N) * sum(v * v for v in m)
    ssum = 0.0
    for k in range(N):
        for j in range(1, n + 1):
            arg = (mf[(k - j) % N] - mf[k] + j) / N
            if arg <= 0.0:
                raise GenericityError(
                    f"nonpositive psi_m2 argument {arg:.6g} at (k={k}, j={j}); "
                    "full m gaps must lie in (-1, 1)")
            ssum += psi_m2(arg)
    return acc + 0.5 * N * ssum


@dataclass(frozen=True)
class GradientCheckReport:
    n: int
    h: float
    residuals: tuple[float, ...]
    max_residual: float


@dataclass(frozen=True)
class SymplecticCheckReport:
    n: int
    h: float
    matrix: tuple[tuple[float, ...], ...]
    max_asymmetry: float


def verify_generating_function(n: int, gamma, rho=None,
                               h: float = 1e-4) -> GradientCheckReport:
    """Central-difference check that dF/dm_i reproduces -log e_i.

    Perturbing m_i by h moves full gamma gaps by up to 4h, so genericity is
    required with that margin; violating it is a parameter error.
    """
    L = reduced_length(n)
    gamma = [float(v) for v in gamma]
    if rho is None:
        rho = [0.0] * L
    rho = [float(v) for v in rho]
    try:
        check_genericity(n, gamma, margin=4.0 * h + DEFAULT_MARGIN)
    except GenericityError as exc:
        raise ValueError(f"step h={h:g} too large for genericity margin: {exc}") from exc
    m = [-0.5 * g for g in gamma]
    log_e = asymptotic_to_monodromy(AsymptoticData(n, tuple(gamma), tuple(rho))).log_e
    residuals = []
    for i in range(L):
        mp = list(m); mp[i] += h
        mm = list(m); mm[i] -= h
        dF = (gen_fun_F(n, rho, mp) - gen_fun_F(n, rho, mm)) / (2.0 * h)
        residuals.append(abs(dF + log_e[i]))
    return GradientCheckReport(n=n, h=h, residuals=tuple(residuals),
                               max_residual=max(residuals))


def verify_symplectic(n: int, gamma, h: float = 1e-4) -> SymplecticCheckReport:
    """Symmetry check of A_ij = d/dgamma_j [log X_{n-i} - log X_i](full gamma).

    Symmetry of A is equivalent to preservation of the pairing
    -1/2 sum dgamma ^ drho = sum dm ^ dlog e under the chart change.
    """
    L = reduced_length(n)
    gamma = [float(v) for v in gamma]
    try:
        check_genericity(n, gamma, margin=4.0 * h + DEFAULT_MARGIN)
    except GenericityError as exc:
        raise ValueError(f"step h={h:g} too large for genericity margin: {exc}") from exc

    def g_i(gm, i):
        full = expand_reduced(n, gm)
        return log_x_k(n - i, full, n) - log_x_k(i, full, n)

    A = [[0.0] * L for _ in range(L)]
    for i in range(L):
        for j in range(L):
            gp = list(gamma); gp[j] += h
            gm_ = list(gamma); gm_[j] -= h
            A[i][j] = (g_i(gp, i) - g_i(gm_, i)) / (2.0 * h)
    asym = max(abs(A[i][j] - A[j][i]) for i in range(L) for j in range(L))
    return SymplecticCheckReport(n=n, h=h,
                                 matrix=tuple(tuple(row) for row in A),
                                 max_asymmetry=asym)
