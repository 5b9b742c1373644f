#!/usr/bin/env python3
"""Dynamics oracle for the smooth-family rho formula (n = 1).

For the n = 1 chain the globally smooth solutions form a one-parameter
family: for each gamma0 there is exactly one rho0 whose trajectory decays
at infinity; larger rho0 blows up to +inf, smaller to -inf.  This script
measures that separatrix by bisection on plain forward integrations and
compares it with the closed form rho = -gamma log 2 + log(X_1/X_0) on the
reversed data, plus the small-gamma slope (log 2 + euler_gamma) gamma
forced by matching the decaying Bessel mode of the linearized equation.

Usage:
    python scripts/separatrix_check.py
    python scripts/separatrix_check.py --gammas 0.1,0.3,0.5 --x0 1e-4
"""

import argparse
import math
import sys

import numpy as np

from ttstar_toda import (AsymptoticData, IntegratorConfig, global_rho,
                         init_from_asymptotics, integrate)


def blow_sign(gamma0: float, rho0: float, x0: float) -> int:
    a = AsymptoticData(1, (gamma0,), (rho0,))
    cfg = IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12, blowup_threshold=5.0)
    traj = integrate(init_from_asymptotics(a, x0), 14.0, cfg, 1)
    if traj.stop_reason != "blowup":
        return 0
    return 1 if traj.points[-1].w[0] > 0 else -1


def separatrix(gamma0: float, x0: float, lo=-4.0, hi=4.0) -> float:
    s_lo, s_hi = blow_sign(gamma0, lo, x0), blow_sign(gamma0, hi, x0)
    if s_lo == s_hi:
        raise RuntimeError("bracketing failed")
    for _ in range(55):
        mid = 0.5 * (lo + hi)
        s = blow_sign(gamma0, mid, x0)
        if s == 0:
            return mid
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gammas", default="0.1,0.3,0.5")
    ap.add_argument("--x0", type=float, default=1e-4)
    args = ap.parse_args()

    slope = math.log(2.0) + float(np.euler_gamma)
    print(f"{'gamma0':>8s} {'measured rho*':>15s} {'closed form':>15s} "
          f"{'linearized':>12s} {'meas-closed':>12s}")
    for tok in args.gammas.split(","):
        g = float(tok)
        meas = separatrix(g, args.x0)
        closed = global_rho(1, (g,))[0]
        print(f"{g:>8.3f} {meas:>15.6f} {closed:>15.6f} "
              f"{slope * g:>12.6f} {meas - closed:>12.2e}")
    print("\n(measured minus closed form shrinks with x0: the leading-order")
    print(" seed carries an O(x0^eps) truncation bias)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
