"""POVMs, states, smeared marginals, and covariant phase-space observables.

A POVM is a finite list of labelled effects. Covariant phase-space
observables have one effect per phase-space point,

    effect(x, chi) = (1/n) W_{x,chi} S W_{x,chi}^dag,

for a single generating state S, and are informationally complete exactly
when the effects span the full operator space. The rank test below is the
implemented criterion; the equivalent characterization through the
nowhere-vanishing Weyl transform of S is documented but not exposed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_TOL, Tolerance, is_psd, require_hermitian
from .errors import DimensionError
from .weyl import WeylSystem

PROB_FLOOR = -1e-12


@dataclass
class ProbVector:
    """Probability distribution over explicit outcome labels."""

    outcomes: tuple
    weights: np.ndarray

    def __post_init__(self):
        self.outcomes = tuple(self.outcomes)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(w) != len(self.outcomes):
            raise DimensionError(
                f"{len(self.outcomes)} outcomes but {len(w)} weights"
            )
        if w.min(initial=0.0) < PROB_FLOOR:
            raise ValueError(f"negative probability {w.min():.3e}")
        w = np.clip(w, 0.0, None)
        if abs(w.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {w.sum()!r}, not 1")
        self.weights = w

    def __len__(self) -> int:
        return len(self.outcomes)


@dataclass
class Povm:
    """Positive operator-valued measure with explicit outcome labels."""

    outcomes: tuple
    effects: np.ndarray  # (k, n, n)

    def __post_init__(self):
        self.outcomes = tuple(self.outcomes)
        e = np.asarray(self.effects, dtype=complex)
        if e.ndim != 3 or e.shape[1] != e.shape[2]:
            raise DimensionError(f"effects must be a (k, n, n) stack, got {e.shape}")
        if e.shape[0] != len(self.outcomes):
            raise DimensionError(
                f"{len(self.outcomes)} outcomes but {e.shape[0]} effects"
            )
        if not np.all(np.isfinite(e)):
            raise ValueError("effects contain non-finite entries")
        for k in range(e.shape[0]):
            if not is_psd(e[k]):
                raise ValueError(f"effect {k} is not positive semidefinite")
        total = e.sum(axis=0)
        defect = float(np.linalg.norm(total - np.eye(e.shape[1])))
        if defect > 1e-9:
            raise ValueError(f"effects sum to identity defect {defect:.3e}")
        self.effects = e

    @property
    def dim(self) -> int:
        return self.effects.shape[1]

    def __len__(self) -> int:
        return len(self.outcomes)


def ensure_state(rho: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, PSD, unit trace within 1e-9."""
    rho = require_hermitian(np.asarray(rho, dtype=complex), tol)
    if not is_psd(rho, tol):
        raise ValueError("state is not positive semidefinite")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 1e-9:
        raise ValueError(f"state trace is {tr!r}, not 1")
    return rho


def measure(povm: Povm, rho: np.ndarray) -> ProbVector:
    """Outcome distribution tr[E_k rho] of a POVM in a state."""
    rho = ensure_state(rho)
    if rho.shape[0] != povm.dim:
        raise DimensionError(
            f"state dim {rho.shape[0]} != POVM dim {povm.dim}"
        )
    w = np.einsum("kij,ji->k", povm.effects, rho).real
    return ProbVector(povm.outcomes, w)


# ==================== smeared sharp observables ====================


def _group_distribution(ws: WeylSystem, dist: ProbVector, name: str) -> np.ndarray:
    if dist.outcomes != ws.group.elements:
        raise ValueError(
            f"{name} must be indexed by the group elements in enumeration order"
        )
    return dist.weights


def smear_position(ws: WeylSystem, sigma: ProbVector) -> Povm:
    """Position observable convolved with sigma:
    effect(x) = sum_y sigma(x - y) |e_y><e_y|."""
    w = _group_distribution(ws, sigma, "sigma")
    g = ws.group
    n = ws.dim
    effects = np.zeros((n, n, n), dtype=complex)
    diag = np.arange(n)
    sub = g.add_table[:, g.neg_table]  # sub[k, y] = index(x_k - x_y)
    for k in range(n):
        effects[k, diag, diag] = w[sub[k]]
    return Povm(g.elements, effects)


def smear_momentum(ws: WeylSystem, tau: ProbVector) -> Povm:
    """Momentum observable convolved with tau:
    effect(chi) = sum_gamma tau(chi - gamma) B({gamma})."""
    w = _group_distribution(ws, tau, "tau")
    g = ws.group
    sub = g.add_table[:, g.neg_table]
    coeff = w[sub]  # coeff[k, gamma] = tau(chi_k - gamma)
    effects = np.einsum("kc,cab->kab", coeff, ws.momentum_effects)
    return Povm(g.elements, effects)


# ==================== covariant phase-space observables ====================


def cpso_from_state(ws: WeylSystem, s: np.ndarray) -> Povm:
    """Covariant phase-space observable generated by the state s:
    effect(x, chi) = (1/n) U_x V_chi s V_chi^dag U_x^dag, outcomes x-major."""
    s = ensure_state(ws.require_dim(s, "generating state"))
    n = ws.dim
    effects = np.empty((n * n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            w = ws.translations[i] @ ws.modulations[j]
            effects[i * n + j] = w @ s @ w.conj().T / n
    return Povm(ws.phase_points, effects)


def effect_span_dimension(povm: Povm, rel_cutoff: float = 1e-8) -> int:
    """Real-linear dimension of the span of the effects.

    Effects are vectorized into rows [Re, Im] and singular values below
    rel_cutoff * s_max are discarded.
    """
    k, n = povm.effects.shape[0], povm.dim
    flat = povm.effects.reshape(k, n * n)
    stacked = np.hstack([flat.real, flat.imag])
    s = np.linalg.svd(stacked, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_cutoff * s[0]))


def is_informationally_complete(povm: Povm, rel_cutoff: float = 1e-8) -> bool:
    """Whether the effects span the whole n^2-dimensional operator space."""
    return effect_span_dimension(povm, rel_cutoff) == povm.dim ** 2


def verify_cpso_covariance(ws: WeylSystem, povm: Povm) -> float:
    """Largest covariance defect of a phase-space POVM:

        max || effect(x+y, chi+gamma)
               - W_{x,chi} effect(y, gamma) W_{x,chi}^dag ||_F

    over all phase-space translations (x, chi) and outcomes (y, gamma).
    """
    n = ws.dim
    if povm.outcomes != ws.phase_points:
        raise ValueError("POVM outcomes must be the phase points, x-major")
    e = povm.effects.reshape(n, n, n, n)  # [x, chi, row, col]
    add = ws.group.add_table
    res = 0.0
    for i in range(n):
        for j in range(n):
            w = ws.translations[i] @ ws.modulations[j]
            moved = np.einsum("ab,ygbd,cd->ygac", w, e, w.conj(), optimize=True)
            target = e[np.ix_(add[i], add[j])]
            diff = target - moved
            norms = np.sqrt((np.abs(diff) ** 2).sum(axis=(2, 3)))
            res = max(res, float(norms.max()))
    return res


# ==================== JSON form ====================


def povm_to_json(povm: Povm) -> dict:
    from .algebra import matrix_to_json

    return {
        "outcomes": [_label_to_json(o) for o in povm.outcomes],
        "effects": [matrix_to_json(e) for e in povm.effects],
    }


def povm_from_json(obj: dict) -> Povm:
    from .algebra import matrix_from_json

    try:
        outcomes = [_label_from_json(o) for o in obj["outcomes"]]
        effects = [matrix_from_json(e) for e in obj["effects"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed POVM object: {exc}") from exc
    return Povm(tuple(outcomes), np.array(effects))


def _label_to_json(label):
    if isinstance(label, tuple):
        return [_label_to_json(v) for v in label]
    return label


def _label_from_json(obj):
    if isinstance(obj, list):
        return tuple(_label_from_json(v) for v in obj)
    return obj
