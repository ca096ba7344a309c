"""Flat Platonic solids at area 4 pi: every available route and its spread."""

import argparse
import csv
import sys

from belyidet.flatdet import flat_log_det
from belyidet.maindet import platonic_log_det
from belyidet.stationarity import platonic_configuration

SOLIDS = {"tetrahedron": -1 / 2, "octahedron": -1 / 3, "cube": -1 / 4, "icosahedron": -1 / 6, "dodecahedron": -1 / 10}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dihedra", type=int, default=6, help="also list dihedra l = 3..N")
    args = ap.parse_args()
    w = csv.writer(sys.stdout)
    w.writerow(["solid", "beta", "log_det", "direct_flat", "n_routes", "max_deviation"])
    jobs = [(s, b, None) for s, b in SOLIDS.items()] + [("dihedron", -2 / l, l) for l in range(3, args.dihedra + 1)]
    for solid, beta, ell in jobs:
        res = platonic_log_det(solid, beta, ell=ell)
        direct = flat_log_det(platonic_configuration(solid, ell)).log_det
        name = solid if ell is None else f"dihedron({ell})"
        w.writerow([name, f"{beta:.12g}", f"{res.log_det:.14f}", f"{direct:.14f}",
                    len(res.extras["routes"]), f"{res.extras['max_deviation']:.2e}"])


if __name__ == "__main__":
    main()
