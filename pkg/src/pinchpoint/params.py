"""Model parameters for the O(n)/SLE family at a given speed kappa.

Everything downstream (conformal weights, Coulomb-gas charges, loop
fugacity) is a closed-form function of kappa in (0, 8).  The dense phase
is kappa > 4 (FK-cluster boundaries), the dilute phase kappa <= 4 (spin
cluster boundaries); the two phases swap the roles of the Kac indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class ChargeKind(Enum):
    KAC = "kac"
    SCREENING_PLUS = "screening_plus"
    SCREENING_MINUS = "screening_minus"


@dataclass(frozen=True)
class Charge:
    """A Coulomb-gas charge (vertex-operator exponent / sqrt(2))."""

    value: float
    kind: ChargeKind
    # Kac labels (r, s, sign) when kind == KAC, else None.
    label: tuple | None = None

    def weight(self, params: "ModelParams") -> float:
        """Conformal weight h(alpha) = alpha*(alpha - 2*alpha0)."""
        return self.value * (self.value - 2.0 * params.alpha0)


def fugacity(kappa: float) -> float:
    """Loop fugacity n(kappa) = -2 cos(4 pi / kappa)."""
    return -2.0 * math.cos(4.0 * math.pi / kappa)


def central_charge(kappa: float) -> float:
    """c(kappa) = (6 - kappa)(3 kappa - 8) / (2 kappa)."""
    return (6.0 - kappa) * (3.0 * kappa - 8.0) / (2.0 * kappa)


def potts_q(kappa: float) -> float:
    """Number of Potts states Q = 4 cos^2(4 pi / kappa) (forward map only)."""
    return 4.0 * math.cos(4.0 * math.pi / kappa) ** 2


@dataclass(frozen=True)
class ModelParams:
    """All kappa-derived constants, computed eagerly and immutable.

    ``theta1`` is the boundary one-leg weight (weight of the bc-changing
    operator at a polygon vertex); ``big_theta[s]`` is the bulk 2s-leg
    weight governing the s-pinch-point decay exponent 2*Theta_s.
    """

    kappa: float
    fugacity_n: float
    central_charge: float
    theta1: float
    big_theta: dict = field(repr=False)
    alpha_plus: float = field(repr=False, default=0.0)
    alpha_minus: float = field(repr=False, default=0.0)

    @property
    def dense(self) -> bool:
        return self.kappa > 4.0

    @property
    def alpha0(self) -> float:
        return 0.5 * (self.alpha_plus + self.alpha_minus)

    def theta(self, s: int) -> float:
        """Boundary s-leg weight theta_s = s(2s + 4 - kappa) / (2 kappa)."""
        return s * (2.0 * s + 4.0 - self.kappa) / (2.0 * self.kappa)

    def big_theta_s(self, s: int) -> float:
        """Bulk 2s-leg weight Theta_s = (16 s^2 - (kappa-4)^2) / (16 kappa)."""
        return (16.0 * s * s - (self.kappa - 4.0) ** 2) / (16.0 * self.kappa)

    def kac_charges(self, r: int, s: int) -> tuple[Charge, Charge]:
        """The two conjugate charges alpha_{r,s}^+- of the Kac weight h_{r,s}."""
        ap = Charge(
            0.5 * (1 + r) * self.alpha_plus + 0.5 * (1 + s) * self.alpha_minus,
            ChargeKind.KAC,
            (r, s, +1),
        )
        am = Charge(
            0.5 * (1 - r) * self.alpha_plus + 0.5 * (1 - s) * self.alpha_minus,
            ChargeKind.KAC,
            (r, s, -1),
        )
        return ap, am


def from_kappa(kappa: float) -> ModelParams:
    """Construct the full parameter set for a given SLE speed kappa.

    Raises ValueError outside the physical window (0, 8).
    """
    if not (0.0 < kappa < 8.0):
        raise ValueError(f"kappa must lie in (0, 8), got {kappa}")
    sk = math.sqrt(kappa) / 2.0
    if kappa > 4.0:
        a_plus, a_minus = sk, -1.0 / sk
    else:
        a_plus, a_minus = 1.0 / sk, -sk
    p = ModelParams(
        kappa=kappa,
        fugacity_n=fugacity(kappa),
        central_charge=central_charge(kappa),
        theta1=0.0,
        big_theta={},
        alpha_plus=a_plus,
        alpha_minus=a_minus,
    )
    # Frozen dataclass: fill the derived weight fields through __dict__ once.
    object.__setattr__(p, "theta1", p.theta(1))
    object.__setattr__(p, "big_theta", {s: p.big_theta_s(s) for s in (1, 2, 3)})
    return p


def kac_weight(r: int, s: int, params: ModelParams) -> float:
    """Kac weight h_{r,s}(kappa), phase-appropriate branch.

    Dense phase (kappa > 4) uses ((kappa r - 4 s)^2 - (kappa-4)^2)/(16 kappa);
    the dilute phase (kappa <= 4) swaps r and s in the first square.
    """
    if r < 0 or s < 0:
        raise ValueError("Kac indices must be non-negative")
    k = params.kappa
    if k > 4.0:
        num = (k * r - 4.0 * s) ** 2 - (k - 4.0) ** 2
    else:
        num = (k * s - 4.0 * r) ** 2 - (k - 4.0) ** 2
    return num / (16.0 * k)


def screening_count(N: int, s: int, charge_case: str = "pp") -> int:
    """Number of screening charges needed to neutralize the correlator.

    ``charge_case`` selects the sign choice for the two bulk charges:
    'pp' -> N - s (the only case used here), 'mm' -> N + s, 'pm' -> N.
    """
    if not (1 <= s <= N):
        raise ValueError(f"need 1 <= s <= N, got s={s}, N={N}")
    if charge_case == "pp":
        return N - s
    if charge_case == "mm":
        return N + s
    if charge_case == "pm":
        return N
    raise ValueError(f"unknown charge case {charge_case!r}")
