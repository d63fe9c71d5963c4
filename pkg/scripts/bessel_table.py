"""Compare quadrature periods of P^1 with the Bessel closed form over a (lambda, x) grid."""
import argparse
import time

import numpy as np

from toric_periods import QuadratureSettings, SpectralParams, build_toric_data, evaluate_period, p1_closed_form
from toric_periods.datasets import P1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--xmin", type=float, default=-2.0)
    ap.add_argument("--xmax", type=float, default=2.0)
    ap.add_argument("--num", type=int, default=9)
    ap.add_argument("--rel-tol", type=float, default=1e-11)
    args = ap.parse_args()

    data = build_toric_data(P1)
    settings = QuadratureSettings(rel_tol=args.rel_tol)
    print(f"{'lambda':>14} {'x':>6} {'Re psi':>22} {'Im psi':>22} {'rel err':>9} {'evals':>6}")
    t0 = time.perf_counter()
    for lam in [(0.0, 0.0), (0.5, -0.3), (1.0, 1.0), (2.0, -2.0)]:
        for x in np.linspace(args.xmin, args.xmax, args.num):
            r = evaluate_period(data, SpectralParams(lam), [x], settings)
            ref = p1_closed_form(lam[0], lam[1], x)
            rel = abs(r.value - ref) / abs(ref)
            print(f"{str(lam):>14} {x:6.2f} {r.value.real:22.15e} {r.value.imag:22.15e} {rel:9.1e} {r.evaluations:6d}")
    print(f"total {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
