"""Largest pairwise disagreement between independent routes, per catalog case.

    python scripts/route_table.py --samples 20
"""
import argparse

import numpy as np

from cosserat_curvature import cosserat3d as c3
from cosserat_curvature import shell as sh
from cosserat_curvature.validation import Context, continuum_cases, shell_cases

CONTINUUM = {
    "wryness": (c3.wryness, [c3.wryness_total, c3.wryness_directors, c3.wryness_omega]),
    "dislocation": (c3.dislocation_density, [c3.dislocation_density_cross, c3.dislocation_density_directors]),
}
SHELL = {
    "curvature": (sh.shell_bending_curvature, [sh.curvature_total, sh.curvature_directors,
                                               sh.curvature_spin, sh.curvature_omega]),
    "dislocation": (sh.shell_dislocation, [sh.dislocation_cross, sh.dislocation_directors]),
}


def table(cases, routes, domain, samples, seed):
    ctx = Context(samples, seed, {})
    names = list(routes)
    print(f"{'case':28s}" + "".join(f"{n:>14s}" for n in names))
    for label, cfg in cases:
        worst = dict.fromkeys(names, 0.0)
        for x in domain(cfg).sample(ctx.rng("route_table", label), samples):
            for n, (ref, others) in routes.items():
                r = ref(cfg, x)
                worst[n] = max([worst[n]] + [float(np.abs(o(cfg, x) - r).max()) for o in others])
        print(f"{label:28s}" + "".join(f"{worst[n]:14.2e}" for n in names))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=10)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()
    table(continuum_cases(with_initial=True), CONTINUUM, lambda c: c.chart, args.samples, args.seed)
    print()
    table(shell_cases(), SHELL, lambda c: c.patch, args.samples, args.seed)


if __name__ == "__main__":
    main()
