"""Spindles pulled back by x^l against the closed spindle formula, and the
round sphere reached at beta = 1/l - 1."""

import math

from belyidet.basedet import make_spindle, triangle_divisor
from belyidet.flatdet import LogDetResult, rescale_log_det
from belyidet.maindet import catalog_ramification, theorem_main
from belyidet.specfun import zetaR_prime_m1


def main() -> None:
    round_sphere = 0.5 - 4 * zetaR_prime_m1()
    print("l,beta,gamma,pullback,direct_spindle,diff")
    for ell in (2, 3, 4, 5):
        ram = catalog_ramification(f"cyclic({ell})")
        for beta in (-0.7, -0.4, -0.1):
            gamma = ell * (beta + 1) - 1
            lhs = theorem_main(ram, make_spindle(beta)).log_det
            # the pullback has area l; bring the unit-area spindle of order gamma there
            sp = make_spindle(gamma)
            unit = LogDetResult(sp.log_det_unit, 1.0, triangle_divisor(sp.triangle), "spindle")
            rhs = rescale_log_det(unit, float(ell)).log_det
            print(f"{ell},{beta},{gamma:.6g},{lhs:.14f},{rhs:.14f},{lhs - rhs:.1e}")
        rep = theorem_main(ram, make_spindle(1 / ell - 1))
        v = rescale_log_det(rep.as_result(), 4 * math.pi).log_det
        print(f"# l={ell}: round sphere {v:.14f} vs 1/2 - 4 zeta'(-1) = {round_sphere:.14f}")


if __name__ == "__main__":
    main()
