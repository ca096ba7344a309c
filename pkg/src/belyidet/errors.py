"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain where a formula is defined."""


class RouteDisagreement(ArithmeticError):
    """Two independent computation routes disagree beyond tolerance."""

    def __init__(self, what: str, a: float, b: float, tol: float):
        self.what, self.a, self.b, self.tol = what, a, b, tol
        super().__init__(f"{what}: routes disagree, {a!r} vs {b!r} (|diff|={abs(a - b):.3g} > {tol:g})")
