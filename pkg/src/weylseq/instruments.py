"""Quantum instruments covariant under phase-space translations.

Completely positive maps are stored in Choi form with the output factor
first:

    choi = sum_{ij} Phi(E_ij) (x) E_ij,

so choi.reshape(n_out, n_in, n_out, n_in)[a, i, b, j] = Phi(E_ij)[a, b].

The measurement model behind everything here couples the system to a
probe through the unitary

    L (e_a (x) e_b) = e_a (x) e_{a+b}

and reads the probe out sharply in position. With probe state omega this
gives the standard instrument

    Phi_k(rho) = tr_2[(1 (x) A({k})) L (rho (x) omega) L^dag],

and the general covariant instrument is a sum of translates of standard
ones, parametrized by an operator-valued measure x -> m(x) with m(x) >= 0
and sum_x tr m(x) = 1:

    I_k(rho) = sum_y U_y^dag Phi^{M'(y)}_k(rho) U_y,
    M'(y) = U_y^dag m(y) U_y.

`reconstruct_measure` inverts this parametrization from the instrument's
action alone, by expanding over the orthogonal operator basis
{V_gamma U_y} (tr[(V_g U_y)^dag V_g' U_y'] = n delta delta).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import is_psd, kron
from .errors import DimensionError, InvalidMeasureError, NotCovariantError
from .group import Group
from .observables import Povm
from .weyl import WeylSystem

COVARIANCE_GATE = 1e-6


@dataclass
class CpMap:
    """Completely positive, trace-non-increasing map in Choi form."""

    dim_in: int
    dim_out: int
    choi: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.choi, dtype=complex)
        want = self.dim_in * self.dim_out
        if c.shape != (want, want):
            raise DimensionError(
                f"Choi matrix shape {c.shape}, expected ({want}, {want})"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("Choi matrix has non-finite entries")
        if not is_psd(c):
            raise ValueError("Choi matrix is not positive semidefinite (map not CP)")
        red = np.einsum("aiaj->ij", c.reshape(self._shape4))
        excess = np.linalg.eigvalsh((red + red.conj().T) / 2 - np.eye(self.dim_in))
        if excess.max(initial=0.0) > 1e-9:
            raise ValueError(
                f"map increases trace: max eigenvalue excess {excess.max():.3e}"
            )
        self.choi = c

    @property
    def _shape4(self) -> tuple:
        return (self.dim_out, self.dim_in, self.dim_out, self.dim_in)

    @cached_property
    def _choi4(self) -> np.ndarray:
        return self.choi.reshape(self._shape4)

    # ---------- construction ----------

    @classmethod
    def from_kraus(cls, kraus, dim_in: int | None = None) -> "CpMap":
        """Build from Kraus operators: choi = sum vec(K) vec(K)^dag."""
        ks = [np.asarray(k, dtype=complex) for k in kraus]
        if not ks:
            raise ValueError("need at least one Kraus operator")
        d_out, d_in = ks[0].shape
        vecs = np.array([k.reshape(-1) for k in ks])
        choi = np.einsum("ka,kb->ab", vecs, vecs.conj())
        return cls(d_in, d_out, choi)

    @classmethod
    def identity(cls, dim: int) -> "CpMap":
        return cls.from_kraus([np.eye(dim)])

    def kraus(self, cutoff: float = 1e-12) -> list:
        """Kraus operators from the Choi eigendecomposition."""
        w, q = np.linalg.eigh((self.choi + self.choi.conj().T) / 2)
        out = []
        top = w.max(initial=0.0)
        for val, vec in zip(w, q.T):
            if val > cutoff * max(top, 1.0):
                out.append(np.sqrt(val) * vec.reshape(self.dim_out, self.dim_in))
        return out

    # ---------- action ----------

    def apply(self, t: np.ndarray) -> np.ndarray:
        """Phi(t) for an arbitrary input matrix t."""
        t = np.asarray(t, dtype=complex)
        if t.shape != (self.dim_in, self.dim_in):
            raise DimensionError(
                f"input shape {t.shape}, expected ({self.dim_in}, {self.dim_in})"
            )
        return np.einsum("aibj,ij->ab", self._choi4, t)

    def apply_stack(self, ts: np.ndarray) -> np.ndarray:
        """Phi applied along the first axis of a stack of matrices."""
        return np.einsum("aibj,...ij->...ab", self._choi4, ts, optimize=True)

    def dual_apply(self, a: np.ndarray) -> np.ndarray:
        """Heisenberg dual: tr[Phi(t) a] = tr[t Phi^*(a)] for all t."""
        a = np.asarray(a, dtype=complex)
        if a.shape != (self.dim_out, self.dim_out):
            raise DimensionError(
                f"input shape {a.shape}, expected ({self.dim_out}, {self.dim_out})"
            )
        return np.einsum("aibj,ba->ji", self._choi4, a)

    def compose(self, first: "CpMap") -> "CpMap":
        """self after first, as a Choi matrix."""
        if first.dim_out != self.dim_in:
            raise DimensionError(
                f"cannot compose: inner dims {first.dim_out} vs {self.dim_in}"
            )
        c = np.einsum("xayb,aibj->xiyj", self._choi4, first._choi4, optimize=True)
        d = self.dim_out * first.dim_in
        return CpMap(first.dim_in, self.dim_out, c.reshape(d, d))


@dataclass
class Instrument:
    """Collection of CP maps labelled by outcomes, summing to a channel."""

    outcomes: tuple
    maps: tuple

    def __post_init__(self):
        self.outcomes = tuple(self.outcomes)
        self.maps = tuple(self.maps)
        if len(self.outcomes) != len(self.maps):
            raise DimensionError(
                f"{len(self.outcomes)} outcomes but {len(self.maps)} maps"
            )
        if not self.maps:
            raise ValueError("instrument needs at least one outcome")
        d_in = self.maps[0].dim_in
        d_out = self.maps[0].dim_out
        for m in self.maps:
            if (m.dim_in, m.dim_out) != (d_in, d_out):
                raise DimensionError("instrument maps have mismatched dimensions")
        total = sum(m.dual_apply(np.eye(d_out)) for m in self.maps)
        defect = float(np.linalg.norm(total - np.eye(d_in)))
        if defect > 1e-9:
            raise ValueError(
                f"total map is not trace preserving: defect {defect:.3e}"
            )

    @property
    def dim_in(self) -> int:
        return self.maps[0].dim_in

    @property
    def dim_out(self) -> int:
        return self.maps[0].dim_out

    def __len__(self) -> int:
        return len(self.outcomes)


@dataclass
class CovariantMeasure:
    """Operator-valued measure on G: densities m(x) >= 0, sum_x tr m(x) = 1."""

    group: Group
    m: np.ndarray  # (n, n, n)

    def __post_init__(self):
        m = np.asarray(self.m, dtype=complex)
        n = self.group.order
        if m.shape != (n, n, n):
            raise InvalidMeasureError(
                f"measure stack has shape {m.shape}, expected ({n}, {n}, {n})"
            )
        if not np.all(np.isfinite(m)):
            raise InvalidMeasureError("measure has non-finite entries")
        for k in range(n):
            try:
                ok = is_psd(m[k])
            except Exception as exc:
                raise InvalidMeasureError(f"density {k}: {exc}") from exc
            if not ok:
                raise InvalidMeasureError(
                    f"density at outcome {k} is not positive semidefinite"
                )
        total = float(np.trace(m.sum(axis=0)).real)
        if abs(total - 1.0) > 1e-9:
            raise InvalidMeasureError(
                f"measure not normalized: total trace {total!r}"
            )
        self.m = m

    @classmethod
    def point_mass(cls, ws: WeylSystem, x, omega: np.ndarray) -> "CovariantMeasure":
        """The measure delta_x (x) omega concentrated at a single outcome."""
        n = ws.dim
        m = np.zeros((n, n, n), dtype=complex)
        m[ws.group.index(x)] = omega
        return cls(ws.group, m)


# ==================== construction ====================


def coupling_unitary(ws: WeylSystem) -> np.ndarray:
    """Permutation L with L(e_a (x) e_b) = e_a (x) e_{a+b}.

    It intertwines the Weyl pairs as
        L (U_x (x) U_y) = (U_x (x) U_{x+y}) L,
        L (V_chi (x) V_gamma) = (V_{chi - gamma} (x) V_gamma) L.
    """
    n = ws.dim
    add = ws.group.add_table
    out = np.zeros((n * n, n * n))
    for a in range(n):
        for b in range(n):
            out[a * n + add[a, b], a * n + b] = 1.0
    return out


def _pointer_chois(ws: WeylSystem, probe: np.ndarray) -> np.ndarray:
    """Choi stack of rho -> tr_2[(1 (x) A({k})) L (rho (x) probe) L^dag].

    Linear in `probe`, which may be any matrix, not only a state. Returns
    shape (n, n^2, n^2), one Choi matrix per pointer outcome k.
    """
    n = ws.dim
    lr = coupling_unitary(ws).reshape(n, n, n, n).astype(complex)
    # Phi_k(E_ij)[a, b] = sum_{c,e} L[(a,k),(i,c)] probe[c,e] conj(L[(b,k),(j,e)])
    chois = np.einsum("akic,ce,bkje->kaibj", lr, probe, lr.conj(), optimize=True)
    return chois.reshape(n, n * n, n * n)


def standard_instrument(ws: WeylSystem, omega: np.ndarray) -> Instrument:
    """Instrument of the position measurement model with probe state omega."""
    from .observables import ensure_state

    omega = ensure_state(ws.require_dim(omega, "probe state"))
    chois = _pointer_chois(ws, omega)
    n = ws.dim
    maps = tuple(CpMap(n, n, chois[k]) for k in range(n))
    return Instrument(ws.group.elements, maps)


def covariant_instrument(ws: WeylSystem, mm: CovariantMeasure) -> Instrument:
    """Covariant instrument generated by an operator-valued measure.

    I_k(rho) = sum_y U_y^dag Phi^{M'(y)}_k(rho) U_y with
    M'(y) = U_y^dag m(y) U_y; reduces to `standard_instrument` when mm is
    a point mass at zero.
    """
    if mm.group != ws.group:
        raise InvalidMeasureError("measure group does not match the Weyl system")
    n = ws.dim
    eye = np.eye(n)
    total = np.zeros((n, n * n, n * n), dtype=complex)
    for y in range(n):
        if float(np.abs(mm.m[y]).max()) == 0.0:
            continue
        uy = ws.translations[y]
        mprime = uy.conj().T @ mm.m[y] @ uy
        chois = _pointer_chois(ws, mprime)
        rot = kron(uy.conj().T, eye)
        total += rot @ chois @ rot.conj().T
    total = (total + total.conj().transpose(0, 2, 1)) / 2
    maps = tuple(CpMap(n, n, total[k]) for k in range(n))
    return Instrument(ws.group.elements, maps)


def associated_observable(instr: Instrument) -> Povm:
    """POVM recording only the outcome statistics of an instrument."""
    eye = np.eye(instr.dim_out)
    effects = np.array([m.dual_apply(eye) for m in instr.maps])
    return Povm(instr.outcomes, effects)


def compose_sequential(first: Instrument, second: Instrument) -> Instrument:
    """Run `first`, then `second` on the output. Outcomes are pairs,
    first-outcome major."""
    outcomes = tuple((a, b) for a in first.outcomes for b in second.outcomes)
    maps = tuple(
        second.maps[j].compose(first.maps[i])
        for i in range(len(first))
        for j in range(len(second))
    )
    return Instrument(outcomes, maps)


# ==================== covariance ====================


def _require_group_instrument(ws: WeylSystem, instr: Instrument) -> None:
    if instr.outcomes != ws.group.elements:
        raise ValueError(
            "instrument outcomes must be the group elements in enumeration order"
        )
    if instr.dim_in != ws.dim or instr.dim_out != ws.dim:
        raise DimensionError("instrument dimension does not match the Weyl system")


def verify_covariance(ws: WeylSystem, instr: Instrument) -> float:
    """Largest covariance defect of an instrument over G:

        max_k,x,chi,(i,j) || I_{k+x}(E_ij)
                             - W I_k(W^dag E_ij W) W^dag ||_F

    with W = U_x V_chi, evaluated at the Choi level where the sweep over
    matrix units E_ij is a block-norm maximum.
    """
    _require_group_instrument(ws, instr)
    n = ws.dim
    chois = np.array([m.choi for m in instr.maps])
    add = ws.group.add_table
    res = 0.0
    for i in range(n):
        for j in range(n):
            w = ws.translations[i] @ ws.modulations[j]
            ww = kron(w, w.conj())
            moved = np.einsum(
                "ab,kbc,dc->kad", ww, chois, ww.conj(), optimize=True
            )
            diff = chois[add[i]] - moved
            d4 = diff.reshape(n, n, n, n, n)  # [k, a, i, b, j]
            norms = np.sqrt((np.abs(d4) ** 2).sum(axis=(1, 3)))
            res = max(res, float(norms.max()))
    return res


# ==================== measure reconstruction ====================


def reconstruct_measure(ws: WeylSystem, instr: Instrument) -> CovariantMeasure:
    """Recover the operator-valued measure of a covariant instrument.

    Probing the instrument with the matrices T_{y,beta} = U_y V_beta^dag
    and contracting against characters isolates every Fourier coefficient
    of the translated densities M'(x):

        n * tr[V_gamma U_y FM'(chi)]
            = sum_x gamma(x) tr[V_chi U_y^dag I_x(U_y V_{chi+gamma}^dag)],

    after which FM'(chi) is reassembled over the orthogonal operator basis
    {V_gamma U_y} and inverted back to m(x) = U_x M'(x) U_x^dag.

    Raises NotCovariantError if the covariance defect exceeds 1e-6.
    """
    defect = verify_covariance(ws, instr)
    if defect > COVARIANCE_GATE:
        raise NotCovariantError(
            f"covariance defect {defect:.3e} exceeds {COVARIANCE_GATE}"
        )
    n = ws.dim
    g = ws.group
    u, v = ws.translations, ws.modulations
    table = g.character_table
    add = g.add_table

    # probes[y, beta] = U_y V_beta^dag, pushed through every outcome map
    probes = np.einsum("yab,tcb->ytac", u, v.conj(), optimize=True)
    pushed = np.array([instr.maps[x].apply_stack(probes) for x in range(n)])

    udag = u.conj().transpose(0, 2, 1)
    vdag = v.conj().transpose(0, 2, 1)
    basis_dag = np.einsum("yab,gbc->ygac", udag, vdag, optimize=True)

    fm_prime = np.empty((n, n, n), dtype=complex)
    for c in range(n):
        # coeff[y, g] = (1/n) tr[V_c U_y^dag sum_x gamma_g(x) I_x(T_{y, c+g})]
        sel = pushed[:, :, add[c]]  # [x, y, g, a, b] with beta = c + g
        summed = np.einsum("gx,xygab->ygab", table, sel, optimize=True)
        front = np.einsum("ab,ybc->yac", v[c], udag, optimize=True)
        coeff = np.einsum("yac,ygca->yg", front, summed, optimize=True) / n
        fm_prime[c] = np.einsum("yg,ygab->ab", coeff, basis_dag, optimize=True) / n
    # m(x) = U_x [ (1/n) sum_c chi_c(x) FM'(c) ] U_x^dag
    mprime = np.einsum("cx,cab->xab", table, fm_prime, optimize=True) / n
    mstack = np.einsum("xab,xbc,xdc->xad", u, mprime, u.conj(), optimize=True)
    mstack = (mstack + mstack.conj().transpose(0, 2, 1)) / 2
    return CovariantMeasure(g, mstack)


def reconstruction_residual(
    ws: WeylSystem, t: np.ndarray, f1: np.ndarray, f2: np.ndarray
) -> float:
    """Defect of the trace-class expansion identity

        sum_{x,chi} tr[V_chi U_x T] <U_x^dag V_chi^dag f1, f2> = n <T f1, f2>

    with the inner product linear in its first argument.
    """
    t = ws.require_dim(t)
    n = ws.dim
    acc = 0.0 + 0.0j
    for i in range(n):
        for j in range(n):
            d = ws.modulations[j] @ ws.translations[i]
            coeff = np.einsum("ab,ba->", d, t)
            acc += coeff * (f2.conj() @ (d.conj().T @ f1))
    return float(abs(acc - n * (f2.conj() @ (t @ f1))))


# ==================== JSON form ====================


def instrument_to_json(ws: WeylSystem, instr: Instrument) -> dict:
    from .algebra import matrix_to_json

    _require_group_instrument(ws, instr)
    return {
        "group": ws.group.to_json(),
        "maps": [{"choi": matrix_to_json(m.choi)} for m in instr.maps],
    }


def instrument_from_json(obj: dict):
    """Returns (group, instrument); outcomes are the group elements."""
    from .algebra import matrix_from_json

    try:
        group = Group.from_json(obj["group"])
        chois = [matrix_from_json(m["choi"]) for m in obj["maps"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed instrument object: {exc}") from exc
    n = group.order
    if len(chois) != n:
        raise DimensionError(f"expected {n} maps, got {len(chois)}")
    maps = tuple(CpMap(n, n, c) for c in chois)
    return group, Instrument(group.elements, maps)


def measure_to_json(mm: CovariantMeasure) -> dict:
    from .algebra import matrix_to_json

    return {
        "group": mm.group.to_json(),
        "m": [matrix_to_json(mx) for mx in mm.m],
    }


def measure_from_json(obj: dict) -> CovariantMeasure:
    from .algebra import matrix_from_json

    try:
        group = Group.from_json(obj["group"])
        stacks = [matrix_from_json(mx) for mx in obj["m"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed measure object: {exc}") from exc
    return CovariantMeasure(group, np.array(stacks))
