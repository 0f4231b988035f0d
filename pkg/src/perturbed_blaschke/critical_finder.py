"""Critical points and zeros of the perturbed family.

Seeds come from closed forms (the Blaschke critical points and the
fifth-root asymptotics near the origin); every seed is polished with Newton.
Residuals are judged against the local size of the dominant ``lam/z**k``
term, since absolute residuals mean little close to the double pole at 0.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Literal

from .errors import DegenerateInventoryError, DomainError, NoConvergenceError
from .rational_map import (
    ParameterPair,
    eval_derivative,
    eval_second_derivative,
    evaluate,
)

__all__ = [
    "WORKING_BOUND",
    "RESIDUAL_TOL",
    "CriticalInventory",
    "blaschke_crits",
    "small_zero_seeds",
    "small_crit_seeds",
    "refine_root",
    "full_inventory",
    "check_annulus",
    "annulus_bounds",
    "value_scale",
    "derivative_scale",
]

WORKING_BOUND = 1e-3
RESIDUAL_TOL = 1e-9
MAX_NEWTON = 50
COLLISION_FACTOR = 0.1

_FIFTH_ROOTS = [cmath.exp(2j * math.pi * k / 5) for k in range(5)]


def value_scale(p: ParameterPair, z: complex) -> float:
    return max(1.0, abs(p.lam) / abs(z) ** 2)


def derivative_scale(p: ParameterPair, z: complex) -> float:
    return max(1.0, abs(p.lam) / abs(z) ** 3)


def _check_a(a: complex) -> complex:
    a = complex(a)
    if not 0.0 < abs(a) < 1.0:
        raise DomainError(f"|a| must lie in (0, 1), got {abs(a)!r}")
    return a


def blaschke_crits(a: complex) -> tuple[complex, complex]:
    """Free critical points ``(c_minus, c_plus)`` of the unperturbed product.

    ``c = a/(3|a|^2) * (2 + |a|^2 -/+ sqrt((|a|^2 - 4)(|a|^2 - 1)))``; the
    radicand is positive on the punctured disk so the real root is taken.
    """
    a = _check_a(a)
    s = abs(a) ** 2
    root = math.sqrt((s - 4.0) * (s - 1.0))
    scale = a / (3.0 * s)
    return scale * (2.0 + s - root), scale * (2.0 + s + root)


def _by_argument(points):
    return sorted(points, key=lambda w: cmath.phase(w) % (2 * math.pi))


def _require_perturbed(p: ParameterPair):
    if p.lam == 0:
        raise DomainError("small roots only exist for lambda != 0")


def small_zero_seeds(p: ParameterPair) -> list[complex]:
    """``xi * (lam/a)**(1/5)`` over the fifth roots of unity ``xi``."""
    _require_perturbed(p)
    base = cmath.exp(cmath.log(p.lam / p.a) / 5)
    return _by_argument(xi * base for xi in _FIFTH_ROOTS)


def small_crit_seeds(p: ParameterPair) -> list[complex]:
    """``-xi * (2 lam / 3a)**(1/5)`` over the fifth roots of unity ``xi``."""
    _require_perturbed(p)
    base = cmath.exp(cmath.log(2 * p.lam / (3 * p.a)) / 5)
    return _by_argument(-xi * base for xi in _FIFTH_ROOTS)


def annulus_bounds(p: ParameterPair) -> tuple[float, float]:
    """Inner and outer radii of the round annulus holding the small roots."""
    r = abs(p.lam) / abs(p.a)
    return (r / 2) ** 0.2, (2 * r) ** 0.2


def _residual(kind, p, z):
    if kind == "value":
        return abs(evaluate(p, z)) / value_scale(p, z)
    return abs(eval_derivative(p, z)) / derivative_scale(p, z)


def refine_root(
    kind: Literal["value", "derivative"],
    p: ParameterPair,
    seed: complex,
    *,
    tol: float = RESIDUAL_TOL,
    max_iter: int = MAX_NEWTON,
) -> complex:
    """Newton-polish ``seed`` to a root of ``B`` (``kind="value"``) or ``B'``.

    The iterate must stay within ten times the first Newton step of the
    seed. Raises :class:`NoConvergenceError` otherwise, or when the scaled
    residual is not below ``tol`` after ``max_iter`` steps.
    """
    if kind == "value":
        f, df = evaluate, eval_derivative
    elif kind == "derivative":
        f, df = eval_derivative, eval_second_derivative
    else:
        raise ValueError(f"unknown function kind {kind!r}")

    seed = complex(seed)
    z = seed
    trust = None
    try:
        for _ in range(max_iter):
            fz = f(p, z)
            dfz = df(p, z)
            if dfz == 0 or not isinstance(fz, complex):
                raise NoConvergenceError(f"Newton broke down at {z!r}")
            step = fz / dfz
            z = z - step
            if trust is None:
                trust = 10.0 * abs(step)
            if abs(z - seed) > trust and abs(z - seed) > 1e-300:
                raise NoConvergenceError(
                    f"Newton left the trust disk around seed {seed!r}"
                )
            if abs(step) <= 4e-16 * abs(z):
                break
    except (DomainError, ZeroDivisionError, OverflowError) as exc:
        raise NoConvergenceError(f"Newton hit a singularity from {seed!r}") from exc
    if not _residual(kind, p, z) < tol:
        raise NoConvergenceError(
            f"residual {_residual(kind, p, z):.3e} above tolerance from seed {seed!r}"
        )
    return z


@dataclass(frozen=True)
class CriticalInventory:
    """All free critical points and finite zeros of ``B_{a,lam}``.

    ``small_zeros`` and ``small_crits`` are ordered by argument in
    ``[0, 2pi)``. Infinity is a critical point of multiplicity 2 and, when
    ``origin_is_pole``, the origin is a double pole and a simple critical
    point; together with the ten small roots and ``c_minus``/``c_plus`` this
    accounts for all ``2*6 - 2 = 10`` critical points.
    """

    params: ParameterPair
    c_plus: complex
    c_minus: complex
    z0: complex
    pole_z_inf: complex
    small_zeros: tuple[complex, ...]
    small_crits: tuple[complex, ...]
    origin_is_pole: bool
    zero_residuals: tuple[float, ...] = field(default=(), repr=False)
    crit_residuals: tuple[float, ...] = field(default=(), repr=False)

    @property
    def critical_count(self) -> int:
        """Critical points counted with multiplicity."""
        count = 2 + len(self.small_crits) + 2
        return count + (1 if self.origin_is_pole else 0)

    @property
    def finite_zero_count(self) -> int:
        return len(self.small_zeros) + 1

    def roles(self):
        """Yield ``(role, point, scaled residual)`` for every listed root."""
        p = self.params
        yield "c_plus", self.c_plus, _residual("derivative", p, self.c_plus)
        yield "c_minus", self.c_minus, _residual("derivative", p, self.c_minus)
        yield "z0", self.z0, _residual("value", p, self.z0)
        yield "pole", self.pole_z_inf, 0.0
        for k, w in enumerate(self.small_zeros):
            yield f"zero{k}", w, _residual("value", p, w)
        for k, c in enumerate(self.small_crits):
            yield f"crit{k}", c, _residual("derivative", p, c)

    def to_text(self) -> str:
        """Flat record, one root per line: ``role re im residual``."""
        lines = ["# role re im residual"]
        for role, z, res in self.roles():
            lines.append(f"{role} {z.real:.17g} {z.imag:.17g} {res:.3e}")
        return "\n".join(lines) + "\n"


def full_inventory(
    p: ParameterPair, *, working_bound: float = WORKING_BOUND
) -> CriticalInventory:
    """Seed and refine every critical point and zero of ``B_{a,lam}``."""
    _require_perturbed(p)
    if abs(p.lam) > working_bound:
        raise DomainError(
            f"|lambda|={abs(p.lam):.3g} exceeds the working bound {working_bound:g}"
        )
    cm0, cp0 = blaschke_crits(p.a)
    c_minus = refine_root("derivative", p, cm0)
    c_plus = refine_root("derivative", p, cp0)
    z0 = refine_root("value", p, p.a)
    zeros = tuple(refine_root("value", p, s) for s in small_zero_seeds(p))
    crits = tuple(refine_root("derivative", p, s) for s in small_crit_seeds(p))

    min_sep = COLLISION_FACTOR * abs(p.lam / p.a) ** 0.2
    for u, v in itertools.combinations(zeros + crits, 2):
        if abs(u - v) <= min_sep:
            raise DegenerateInventoryError(
                f"refined small roots {u!r} and {v!r} collided"
            )

    return CriticalInventory(
        params=p,
        c_plus=c_plus,
        c_minus=c_minus,
        z0=z0,
        pole_z_inf=p.pole,
        small_zeros=zeros,
        small_crits=crits,
        origin_is_pole=True,
        zero_residuals=tuple(_residual("value", p, w) for w in zeros),
        crit_residuals=tuple(_residual("derivative", p, c) for c in crits),
    )


def check_annulus(p: ParameterPair, inv: CriticalInventory) -> bool:
    """True iff all ten small roots lie strictly inside the round annulus."""
    lo, hi = annulus_bounds(p)
    return all(lo < abs(w) < hi for w in inv.small_zeros + inv.small_crits)
