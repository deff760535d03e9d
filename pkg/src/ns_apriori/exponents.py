"""Interpolation, Young and embedding exponents in closed form.

For a Hölder exponent ``alpha`` and an integrability index ``q`` the
interpolation weight of an intermediate smoothness ``l`` is

    omega(l) = (q*l + 3) / (q*(2 + alpha) + 3).

With ``q = 6`` (the Sobolev exponent of W^1_2 in three dimensions) the
nonlinear term of the Navier-Stokes system is controlled by
``(|v|^(2+alpha))**a1 * (||v||_6)**a2`` with ``a1 = 6(2+alpha)/(6(2+alpha)+3)``
and ``a2 = 2 - a1``.  Young's inequality with epsilon then trades the product
for ``eps*X + C(eps)*Y**B``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError

SOBOLEV_Q = 6.0


def _check_alpha(alpha):
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def omega(l: float, q: float = SOBOLEV_Q, alpha: float = 0.5) -> float:
    _check_alpha(alpha)
    if not q > 1:
        raise DomainError(f"q must exceed 1, got {q}")
    if not (0.0 <= l <= 2.0 + alpha):
        raise DomainError(f"l must lie in [0, 2 + alpha], got {l}")
    return (q * l + 3.0) / (q * (2.0 + alpha) + 3.0)


def special_omegas(alpha: float) -> tuple[float, float, float, float]:
    """Weights for l = 0, alpha, 1, 1 + alpha with q = 6."""
    _check_alpha(alpha)
    den = 6.0 * (2.0 + alpha) + 3.0
    return (
        3.0 / den,
        (6.0 * alpha + 3.0) / den,
        (6.0 * 1.0 + 3.0) / den,
        (6.0 * (1.0 + alpha) + 3.0) / den,
    )


def a_exponents(alpha: float) -> tuple[float, float]:
    _check_alpha(alpha)
    a1 = 6.0 * (2.0 + alpha) / (6.0 * (2.0 + alpha) + 3.0)
    return a1, 2.0 - a1


def young_exponents(a1: float, a2: float) -> tuple[float, float, float]:
    """Return (A_alt, A_young, B).

    ``A_alt = a1/((1-a1)*a2)`` is the exponent of eps as printed alongside
    the estimate; ``A_young = a1/(1-a1)`` is the exponent that minimising
    ``X**a1 - eps*X`` over X actually produces.  ``B = a2/(1-a1)`` is shared.
    """
    if not (0.0 < a1 < 1.0):
        raise DomainError(f"Young split needs a1 in (0, 1), got {a1}")
    if not a2 > 0:
        raise DomainError(f"a2 must be positive, got {a2}")
    A_alt = a1 / ((1.0 - a1) * a2)
    A_young = a1 / (1.0 - a1)
    B = a2 / (1.0 - a1)
    if abs(a2 - (2.0 - a1)) <= 1e-15:
        B_theorem = (2.0 - a1) / (1.0 - a1)
        assert abs(B - B_theorem) <= 1e-12 * B_theorem, (B, B_theorem)
    return A_alt, A_young, B


def sobolev_critical_exponent(space_dim: int, p: float) -> float:
    """Critical exponent dim*p/(dim - p) of the embedding W^1_p into L_{p*}."""
    if p >= space_dim:
        raise DomainError(f"no critical Sobolev exponent for p={p} >= dim={space_dim}")
    if p < 1:
        raise DomainError(f"p must be at least 1, got {p}")
    return space_dim * p / (space_dim - p)


@dataclass(frozen=True)
class ExponentSet:
    q: float
    alpha: float
    omega_0: float
    omega_alpha: float
    omega_1: float
    omega_1alpha: float
    a1: float
    a2: float
    A_alt: float
    A_young: float
    B: float

    @classmethod
    def build(cls, alpha: float, q: float = SOBOLEV_Q) -> "ExponentSet":
        if q == SOBOLEV_Q:
            w0, wa, w1, w1a = special_omegas(alpha)
        else:
            w0, wa, w1, w1a = (omega(l, q, alpha) for l in (0.0, alpha, 1.0, 1.0 + alpha))
        # a1 is the total weight of the top norm in each product term
        a1 = w0 + w1a if q != SOBOLEV_Q else a_exponents(alpha)[0]
        a2 = 2.0 - a1
        A_alt, A_young, B = young_exponents(a1, a2)
        return cls(q, alpha, w0, wa, w1, w1a, a1, a2, A_alt, A_young, B)

    def omega(self, l: float) -> float:
        return omega(l, self.q, self.alpha)
