"""Radial Hamiltonian dynamics of the anti-symmetric periodic Toda chain.

State is the reduced pair (w, w_tilde) with w_tilde_i = x dw_i/dx on the
half-line x > 0.  For odd n the Hamiltonian is

    H(w, wt; x) = (1/2x) sum wt_i^2
                  - x sum_{i=1..K} exp(2(w_i - w_{i-1}))
                  - (x/2) (exp(-4 w_K) + exp(4 w_0)),      K = (n-1)/2,

with equations of motion dw_i/dx = wt_i/x and
dwt_i/dx = -2x (exp(2(w_{i+1}-w_i)) - exp(2(w_i-w_{i-1}))) under the
anti-symmetric closures w_{-1} = -w_0, w_{K+1} = -w_K.  An even-n variant
(middle entry frozen at 0, boundary term -x exp(-2 w_K)) is available
behind an explicit flag; it is validated against the closure form of the
equations of motion rather than taken from a stated formula.

`integrate` is an embedded Dormand-Prince 5(4) pair with PI step-size
control and the standard quartic dense-output interpolant.  The state is
augmented with q' = H + 2x, so trajectories accumulate the regularized
integral of H against the trivial background -2x as they go.  Blow-up
(sup-norm of w beyond a threshold, or step underflow) flags and returns
the partial trajectory instead of raising.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .data_maps import AsymptoticData, check_genericity, reduced_length

__all__ = [
    "UnsupportedConfigError",
    "PhasePoint",
    "IntegratorConfig",
    "IntegrationStats",
    "Trajectory",
    "hamiltonian",
    "reg_density",
    "vector_field",
    "vector_field_logx",
    "init_from_asymptotics",
    "integrate",
    "tail_amplitude_s1",
    "check_quasihomogeneity",
    "trajectory_to_csv",
]


class UnsupportedConfigError(ValueError):
    """Configuration outside the supported parameter range."""


@dataclass(frozen=True)
class PhasePoint:
    """Reduced phase-space point at radius x (> 0)."""

    x: float
    w: tuple[float, ...]
    wt: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(float(v) for v in self.w))
        object.__setattr__(self, "wt", tuple(float(v) for v in self.wt))
        if not self.x > 0.0:
            raise UnsupportedConfigError(f"x must be positive, got {self.x!r}")
        if len(self.w) != len(self.wt):
            raise UnsupportedConfigError("w and wt must have equal length")


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-11
    abs_tol: float = 1e-12
    max_step: float = math.inf
    blowup_threshold: float = 5.0
    first_step: float | None = None

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise UnsupportedConfigError("tolerances must be positive")


@dataclass
class IntegrationStats:
    n_steps: int = 0
    n_rejected: int = 0
    n_rhs_evals: int = 0
    max_error_estimate: float = 0.0


def _check_n(n: int, L: int, even_variant: bool) -> None:
    if n % 2 == 0 and not even_variant:
        raise UnsupportedConfigError(
            f"n={n} is even; pass even_variant=True to enable the derived extension")
    if L != reduced_length(n):
        raise UnsupportedConfigError(
            f"state length {L} does not match reduced length {reduced_length(n)} for n={n}")


def hamiltonian(p: PhasePoint, n: int, even_variant: bool = False) -> float:
    """Energy H(w, wt; x) of the reduced chain."""
    L = len(p.w)
    _check_n(n, L, even_variant)
    w, wt, x = p.w, p.wt, p.x
    h = sum(v * v for v in wt) / (2.0 * x)
    h -= x * sum(math.exp(2.0 * (w[i] - w[i - 1])) for i in range(1, L))
    if n % 2 == 1:
        h -= 0.5 * x * (math.exp(-4.0 * w[L - 1]) + math.exp(4.0 * w[0]))
    else:
        h -= x * math.exp(-2.0 * w[L - 1]) + 0.5 * x * math.exp(4.0 * w[0])
    return h


def _link_exponentials(w, n: int) -> list[float]:
    """T_i = exp(2(w_{i+1} - w_i)) for i = -1..L-1 under the closures."""
    L = len(w)
    T = []
    for i in range(-1, L):
        if i < 0:
            up, lo = w[0], -w[0]
        elif i + 1 < L:
            up, lo = w[i + 1], w[i]
        elif n % 2 == 1:
            up, lo = -w[L - 1], w[L - 1]
        else:
            up, lo = 0.0, w[L - 1]
        T.append(math.exp(2.0 * (up - lo)))
    return T


def vector_field(p: PhasePoint, n: int, even_variant: bool = False):
    """(dw/dx, dwt/dx) of the Hamiltonian system."""
    L = len(p.w)
    _check_n(n, L, even_variant)
    x = p.x
    T = _link_exponentials(p.w, n)
    dw = tuple(v / x for v in p.wt)
    dwt = tuple(-2.0 * x * (T[i + 1] - T[i]) for i in range(L))
    return dw, dwt


def vector_field_logx(p: PhasePoint, n: int, even_variant: bool = False):
    """Derivatives with respect to X = log x: ((w)_X, (wt)_X)."""
    dw, dwt = vector_field(p, n, even_variant)
    return tuple(p.wt), tuple(p.x * v for v in dwt)


def init_from_asymptotics(a: AsymptoticData, x0: float) -> PhasePoint:
    """Leading-order seed w_i = (gamma_i/2) log x0 + rho_i/2, wt_i = gamma_i/2.

    The dropped O(x0^eps) correction biases downstream quantities by a
    power of x0; the tau-side extrapolation in x0 absorbs it.
    """
    check_genericity(a.n, a.gamma)
    if not 0.0 < x0 <= 0.1:
        raise UnsupportedConfigError(f"x0 must lie in (0, 0.1], got {x0!r}")
    lx = math.log(x0)
    w = tuple(0.5 * g * lx + 0.5 * r for g, r in zip(a.gamma, a.rho))
    wt = tuple(0.5 * g for g in a.gamma)
    return PhasePoint(x=x0, w=w, wt=wt)


# ----------------------------------------------------------------------
# Dormand-Prince 5(4) with PI control and quartic dense output
# ----------------------------------------------------------------------

_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_DP_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920,
                  -17253 / 339200, 22 / 525, -1 / 40])
# quartic dense-output coefficients (Shampine's interpolant for this pair)
_DP_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])


@dataclass
class _DenseSegment:
    x0: float
    h: float
    y0: np.ndarray
    Q: np.ndarray  # (dim, 4)

    def eval(self, x: float) -> np.ndarray:
        th = (x - self.x0) / self.h
        p = np.array([th, th * th, th ** 3, th ** 4])
        return self.y0 + self.h * (self.Q @ p)


class Trajectory:
    """Accepted integration samples plus the accumulated regularized integral.

    `reg_integral` is integral (H + 2x) dx over the covered range; the
    dense segments reproduce any interior state to the interpolant order.
    Phase points are materialized lazily from the raw accepted states.
    """

    def __init__(self, n: int, xs: list[float], ys: list[np.ndarray],
                 reg_integral: float, stats: IntegrationStats, stop_reason: str,
                 even_variant: bool = False,
                 segments: list[_DenseSegment] | None = None):
        self.n = n
        self.reg_integral = reg_integral
        self.stats = stats
        self.stop_reason = stop_reason  # "completed" | "blowup" | "step_underflow"
        self.even_variant = even_variant
        self._xs = xs
        self._ys = ys
        self._segments = segments or []
        self._points: list[PhasePoint] | None = None

    @property
    def points(self) -> list[PhasePoint]:
        if self._points is None:
            L = reduced_length(self.n)
            self._points = [PhasePoint(x=x, w=tuple(y[:L]), wt=tuple(y[L:2 * L]))
                            for x, y in zip(self._xs, self._ys)]
        return self._points

    @property
    def x_final(self) -> float:
        return self._xs[-1]

    def sample_state(self, x: float) -> np.ndarray:
        """Dense-output state [w, wt, q] at any covered x."""
        if not self._segments:
            raise ValueError("trajectory carries no dense output")
        lo, hi = sorted((self._xs[0], self._xs[-1]))
        if not lo <= x <= hi:
            raise ValueError(f"x={x!r} outside covered range [{lo}, {hi}]")
        if self._xs[0] < self._xs[-1]:
            k = bisect.bisect_left(self._xs, x, 1, len(self._xs) - 1)
        else:
            rev = [-v for v in self._xs]
            k = bisect.bisect_left(rev, -x, 1, len(rev) - 1)
        return self._segments[k - 1].eval(x)

    def sample(self, x: float) -> PhasePoint:
        L = reduced_length(self.n)
        y = self.sample_state(x)
        return PhasePoint(x=x, w=tuple(y[:L]), wt=tuple(y[L:2 * L]))

    def reg_integral_to(self, x: float) -> float:
        """integral (H + 2x) dx from the start point up to x."""
        return float(self.sample_state(x)[-1])


def _make_rhs(n: int, even_variant: bool):
    """Vector field of [w, wt, q] with q' = H + 2x.

    Link exponentials enter only through expm1 of the 2(w_{i+1} - w_i)
    differences, so both the force terms and the regularized density
    H + 2x stay relatively accurate down to vanishing amplitudes (the
    trivial-background cancellation is done in closed form).
    """
    L = reduced_length(n)
    if n % 2 == 1:
        # -x(L-1) - x + 2x from the link constants against the +2x term
        q_const = 2.0 - float(L)
    else:
        q_const = 1.5 - float(L)

    def f(x: float, y: np.ndarray) -> np.ndarray:
        w = y[:L]
        wt = y[L:2 * L]
        diffs = np.empty(L + 1)
        diffs[0] = 2.0 * w[0]                      # w_0 - (-w_0)
        diffs[1:L] = w[1:] - w[:-1]
        if n % 2 == 1:
            diffs[L] = -2.0 * w[L - 1]
        else:
            diffs[L] = -w[L - 1]
        E = np.expm1(2.0 * diffs)                  # T_i - 1
        out = np.empty(2 * L + 1)
        out[:L] = wt / x
        out[L:2 * L] = -2.0 * x * (E[1:] - E[:-1])
        q = wt @ wt / (2.0 * x) - x * E[1:L].sum() + q_const * x
        if n % 2 == 1:
            q -= 0.5 * x * (E[L] + E[0])
        else:
            q -= x * E[L] + 0.5 * x * E[0]
        out[2 * L] = q
        return out

    return f, L


def reg_density(p: PhasePoint, n: int, even_variant: bool = False) -> float:
    """H + 2x evaluated without trivial-background cancellation."""
    f, L = _make_rhs(n, even_variant)
    y = np.concatenate([p.w, p.wt, [0.0]])
    return float(f(p.x, y)[2 * L])


def _initial_step(f, x0, y0, f0, direction, rel_tol, abs_tol):
    sc = abs_tol + rel_tol * np.abs(y0)
    d0 = math.sqrt(float(np.mean((y0 / sc) ** 2)))
    d1 = math.sqrt(float(np.mean((f0 / sc) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + direction * h0 * f0
    f1 = f(x0 + direction * h0, y1)
    d2 = math.sqrt(float(np.mean(((f1 - f0) / sc) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1)


def _integrate_raw(n: int, y0: np.ndarray, x0: float, x_end: float,
                   cfg: IntegratorConfig, even_variant: bool = False,
                   abs_tol_vec: np.ndarray | None = None) -> Trajectory:
    """Core stepper; direction inferred from x_end - x0."""
    f, L = _make_rhs(n, even_variant)
    atol = cfg.abs_tol if abs_tol_vec is None else abs_tol_vec
    direction = 1.0 if x_end > x0 else -1.0
    x = float(x0)
    y = np.asarray(y0, dtype=float).copy()
    stats = IntegrationStats()
    k1 = f(x, y)
    stats.n_rhs_evals += 1
    if cfg.first_step is not None:
        h = cfg.first_step
    else:
        h = _initial_step(f, x, y, k1, direction, cfg.rel_tol, cfg.abs_tol)
        stats.n_rhs_evals += 1
    h = min(h, cfg.max_step, abs(x_end - x0))

    ys_hist = [y.copy()]
    segments: list[_DenseSegment] = []
    xs = [x]
    err_prev = 1e-4
    stop = "completed"
    K = np.empty((7, y.size))

    while (x_end - x) * direction > 0.0:
        h = min(h, abs(x_end - x), cfg.max_step)
        if h < 1e-14 * max(1.0, abs(x)):
            stop = "step_underflow"
            break
        hs = direction * h
        K[0] = k1
        for s in range(1, 7):
            ys = y + hs * (_DP_A[s] @ K[:s])
            K[s] = f(x + _DP_C[s] * hs, ys)
        stats.n_rhs_evals += 6
        y_new = y + hs * (_DP_B @ K)
        err_vec = hs * (_DP_E @ K)
        sc = atol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(float(np.mean((err_vec / sc) ** 2)))
        if err <= 1.0:
            segments.append(_DenseSegment(x0=x, h=hs, y0=y, Q=K.T @ _DP_P))
            x = x + hs
            y = y_new
            k1 = K[6].copy()  # FSAL
            xs.append(x)
            ys_hist.append(y)
            stats.n_steps += 1
            stats.max_error_estimate = max(stats.max_error_estimate, err)
            if float(np.max(np.abs(y[:L]))) > cfg.blowup_threshold:
                stop = "blowup"
                break
            fac = 0.9 * err ** -0.14 * err_prev ** 0.08 if err > 0 else 5.0
            err_prev = max(err, 1e-10)
            h = h * min(5.0, max(0.2, fac))
        else:
            stats.n_rejected += 1
            h = h * min(1.0, max(0.2, 0.9 * err ** -0.2))

    return Trajectory(n=n, xs=xs, ys=ys_hist,
                      reg_integral=float(y[-1]) - float(y0[-1]),
                      stats=stats, stop_reason=stop, even_variant=even_variant,
                      segments=segments)


def integrate(start: PhasePoint, x_end: float, cfg: IntegratorConfig | None,
              n: int, even_variant: bool = False) -> Trajectory:
    """Integrate forward from `start` to x_end (adaptive 5(4) pair).

    On blow-up or step underflow the partial trajectory is returned with
    the stopping reason flagged; this is a legitimate outcome, not an
    error.
    """
    cfg = cfg or IntegratorConfig()
    L = len(start.w)
    _check_n(n, L, even_variant)
    if not x_end > start.x:
        raise UnsupportedConfigError("x_end must exceed start.x")
    y0 = np.concatenate([start.w, start.wt, [0.0]])
    return _integrate_raw(n, y0, start.x, x_end, cfg, even_variant)


# ----------------------------------------------------------------------
# Large-x tail amplitude and scaling identity
# ----------------------------------------------------------------------

def tail_amplitude_s1(gamma, n: int = 3) -> float:
    """Leading tail coefficient s1 for the n=3 chain:
    w_i(x) ~ -s1 * 2^(-7/4) (pi x)^(-1/2) exp(-2 sqrt(2) x)."""
    if n != 3:
        raise UnsupportedConfigError("tail amplitude is implemented for n=3 only")
    g0, g1 = float(gamma[0]), float(gamma[1])
    return (-2.0 * math.cos(math.pi / 4.0 * (g0 + 1.0))
            - 2.0 * math.cos(math.pi / 4.0 * (g1 + 3.0)))


def check_quasihomogeneity(p: PhasePoint, lam: float, n: int,
                           even_variant: bool = False) -> float:
    """|H(w, lam*wt; lam*x) - lam*H(w, wt; x)|, which vanishes identically."""
    if lam <= 0.0:
        raise UnsupportedConfigError("lambda must be positive")
    scaled = PhasePoint(x=lam * p.x, w=p.w, wt=tuple(lam * v for v in p.wt))
    return abs(hamiltonian(scaled, n, even_variant)
               - lam * hamiltonian(p, n, even_variant))


# ----------------------------------------------------------------------
# CSV export
# ----------------------------------------------------------------------

def trajectory_to_csv(traj: Trajectory, fh) -> None:
    """Write `x,w0..wK,wt0..wtK,H,reg_integral` rows, one per accepted step."""
    L = reduced_length(traj.n)
    header = (["x"] + [f"w{i}" for i in range(L)] + [f"wt{i}" for i in range(L)]
              + ["H", "reg_integral"])
    fh.write(",".join(header) + "\n")
    for pt, y in zip(traj.points, traj._ys):
        h_val = hamiltonian(pt, traj.n, traj.even_variant)
        row = [pt.x] + list(pt.w) + list(pt.wt) + [h_val, float(y[-1])]
        fh.write(",".join(f"{v + 0.0:.17g}" for v in row) + "\n")
    if traj.stop_reason != "completed":
        fh.write(f"# stopped: {traj.stop_reason} at x={traj.x_final:.17g}\n")
