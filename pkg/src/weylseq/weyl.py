"""Weyl operators and sharp position/momentum observables.

For a finite abelian group G of order n, the translation and modulation
unitaries on C^G are

    (U_x f)(y) = f(y - x)          i.e. U_x e_b = e_{b+x},
    (V_chi f)(y) = chi(y) f(y),

and they satisfy U_x V_chi = conj(chi(x)) V_chi U_x. A phase-space point
(x, chi, u) with |u| = 1 acts through W(x, chi, u) = conj(u) U_x V_chi;
the central phase u cancels in every conjugation A -> W A W^dag, so all
observable-level formulas are u-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import DimensionError, GroupError
from .group import Element, Group


@dataclass(frozen=True)
class PhasePoint:
    """A point (x, chi, u) of the finite Weyl-Heisenberg group."""

    x: tuple
    chi: tuple
    u: complex = 1.0 + 0.0j

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(int(v) for v in self.x))
        object.__setattr__(self, "chi", tuple(int(v) for v in self.chi))
        u = complex(self.u)
        if abs(abs(u) - 1.0) > 1e-12:
            raise ValueError(f"phase u must be unimodular, got |u| = {abs(u)}")
        object.__setattr__(self, "u", u)


def phase_point_product(group: Group, p: PhasePoint, q: PhasePoint) -> PhasePoint:
    """Group law (x, chi, u)(y, gamma, v) = (x+y, chi*gamma, conj(chi(y)) u v)."""
    x = group.add(p.x, q.x)
    chi = group.add(p.chi, q.chi)
    u = np.conj(group.pairing(p.chi, q.x)) * p.u * q.u
    return PhasePoint(x, chi, u)


class WeylSystem:
    """All Weyl operators of a group, cached as dense stacks.

    Attributes
    ----------
    group : Group
    translations : (n, n, n) array, translations[i] = U at elements[i]
    modulations : (n, n, n) array, modulations[i] = V at elements[i]
    fourier : (n, n) unitary with fourier[chi, x] = c * conj(chi(x))
    """

    def __init__(self, group: Group):
        self.group = group
        n = group.order
        self.dim = n
        elems = group.elements
        table = group.character_table

        u = np.zeros((n, n, n), dtype=complex)
        cols = np.arange(n)
        for i in range(n):
            u[i, group.add_table[i], cols] = 1.0
        self.translations = u

        v = np.zeros((n, n, n), dtype=complex)
        for i in range(n):
            v[i, cols, cols] = table[i]
        self.modulations = v

        self.fourier = group.fourier_matrix()
        self._elements = elems

    # ---------- operators ----------

    def translation(self, x: Element) -> np.ndarray:
        return self.translations[self.group.index(x)]

    def modulation(self, chi: Element) -> np.ndarray:
        return self.modulations[self.group.index(chi)]

    def weyl_op(self, p: PhasePoint) -> np.ndarray:
        """W(x, chi, u) = conj(u) * U_x V_chi."""
        w = self.translation(p.x) @ self.modulation(p.chi)
        return np.conj(p.u) * w

    # ---------- sharp observables ----------

    def sharp_position(self, subset: Iterable[Element]) -> np.ndarray:
        """Projection A(X) = sum_{x in X} |e_x><e_x|."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for x in subset:
            i = self.group.index(x)
            out[i, i] = 1.0
        return out

    def sharp_momentum(self, subset: Iterable[Element]) -> np.ndarray:
        """Projection B(Y) = F^dag A(Y) F, the momentum observable."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for chi in subset:
            out += self.momentum_effects[self.group.index(chi)]
        return out

    @cached_property
    def position_effects(self) -> np.ndarray:
        """Stack of A({x}) over the group enumeration."""
        n = self.dim
        out = np.zeros((n, n, n), dtype=complex)
        idx = np.arange(n)
        out[idx, idx, idx] = 1.0
        return out

    @cached_property
    def momentum_effects(self) -> np.ndarray:
        """Stack of B({chi}) = F^dag |e_chi><e_chi| F over the enumeration."""
        f = self.fourier
        return np.einsum("ca,cb->cab", f.conj(), f)

    # ---------- phase-space bookkeeping ----------

    @cached_property
    def phase_points(self) -> tuple:
        """(x, chi) pairs, x-major, matching joint-observable outcome order."""
        elems = self._elements
        return tuple((x, chi) for x in elems for chi in elems)

    def phase_index(self, x: Element, chi: Element) -> int:
        return self.group.index(x) * self.dim + self.group.index(chi)

    def require_dim(self, t: np.ndarray, what: str = "matrix") -> np.ndarray:
        t = np.asarray(t, dtype=complex)
        if t.shape != (self.dim, self.dim):
            raise DimensionError(
                f"{what} has shape {t.shape}, expected ({self.dim}, {self.dim})"
            )
        return t


def snag_residuals(ws: WeylSystem) -> tuple:
    """Residuals of the two finite Fourier expansion identities

        sum_chi conj(chi(x)) B({chi}) = U_x,
        sum_x chi(x) A({x}) = V_chi,

    returned as (translation_residual, modulation_residual) in max norm.
    """
    table = ws.group.character_table
    lhs_u = np.einsum("cx,cab->xab", table.conj(), ws.momentum_effects)
    res_u = float(np.abs(lhs_u - ws.translations).max())
    lhs_v = np.einsum("cx,xab->cab", table, ws.position_effects)
    res_v = float(np.abs(lhs_v - ws.modulations).max())
    return res_u, res_v


def weyl_relation_residual(ws: WeylSystem) -> float:
    """max over all (x, chi) of || U_x V_chi - conj(chi(x)) V_chi U_x ||_max."""
    res = 0.0
    table = ws.group.character_table
    for i in range(ws.dim):
        for j in range(ws.dim):
            lhs = ws.translations[i] @ ws.modulations[j]
            rhs = np.conj(table[j, i]) * ws.modulations[j] @ ws.translations[i]
            res = max(res, float(np.abs(lhs - rhs).max()))
    return res
