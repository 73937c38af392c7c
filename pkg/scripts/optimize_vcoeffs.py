#!/usr/bin/env python3
"""Generate example rotation-coefficient files for small (N, d) by direct
numerical optimization of the oracle's channel entanglement fidelity.

The emitted files ship with the repository as inputs for the general-d
optimal-protocol routines; they are auxiliary tooling, not derived from any
closed form.
"""

import argparse
import pathlib

import numpy as np
from scipy.optimize import minimize

from pbt_recycling import (
    VCoefficients,
    build_optimizing_operator,
    channel_fidelity_oracle,
    partitions_bounded,
    save_v_coefficients,
)


def optimal_v(N: int, d: int, seed: int = 7) -> VCoefficients:
    frames = partitions_bounded(N, d)
    rng = np.random.default_rng(seed)

    def to_v(w: np.ndarray) -> VCoefficients:
        w = np.abs(w)
        w = w / np.linalg.norm(w)
        return VCoefficients(ports=N, dim=d, entries=dict(zip(frames, map(float, w))))

    def objective(w: np.ndarray) -> float:
        try:
            v = to_v(w)
        except ValueError:
            return 1.0
        o = build_optimizing_operator(N, d, v)
        return -channel_fidelity_oracle(N, d, rotation=o)

    best = None
    for _ in range(4):
        w0 = rng.random(len(frames)) + 0.2
        res = minimize(objective, w0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 20000})
        if best is None or res.fun < best.fun:
            best = res
    v = to_v(best.x)
    print(f"(N={N}, d={d}): channel fidelity {-best.fun:.12f} with "
          + ", ".join(f"v[{p}]={v[p]:.9f}" for p in frames))
    return v


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default=str(pathlib.Path(__file__).resolve().parents[1]
                                            / "src" / "pbt_recycling" / "data" / "vcoeffs"))
    args = ap.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for N, d in ((2, 3), (3, 3)):
        v = optimal_v(N, d)
        path = outdir / f"v_n{N}_d{d}.json"
        save_v_coefficients(v, path)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
