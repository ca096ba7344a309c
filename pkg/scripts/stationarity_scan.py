"""Gradient of log det at the regular flat configurations, and how it grows
when one vertex is displaced."""

import math

from belyidet.stationarity import (
    ConfigurationPoint,
    check_platonic_stationarity,
    fd_gradient,
    perturbed,
    platonic_configuration,
)


def main() -> None:
    for solid, ell in (("tetrahedron", None), ("octahedron", None), ("cube", None),
                       ("dihedron", 3), ("dihedron", 4), ("dihedron", 5), ("dihedron", 6)):
        rep = check_platonic_stationarity(solid, ell)
        print(f"{rep.solid:14s} |grad| = {rep.gradient_norm:.2e}  (tol {rep.tolerance:.0e})")
    print("\ndisplacement,|grad| (octahedron, vertex 2 moved along the real axis)")
    cfg = platonic_configuration("octahedron")
    for d in (0.025, 0.05, 0.1, 0.2, 0.3, 0.4):
        g = fd_gradient(ConfigurationPoint.gauge_fixed(perturbed(cfg, 2, d)))
        print(f"{d},{math.sqrt(math.fsum(v * v for v in g)):.3e}")


if __name__ == "__main__":
    main()
