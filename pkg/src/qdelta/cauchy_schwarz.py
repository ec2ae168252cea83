"""Operator-valued Cauchy-Schwarz machinery and the deviation bound chain.

Any CP map ``T`` induces a positive semidefinite sesquilinear form
``(A, B) = T(A†B) - T(A)† T(B)`` (conjugate-linear in the first slot).
A coding scheme induces the closely related form
``(A, B) = C(D(A†B) - D(A)* D(B))`` where the product in the middle is
the componentwise product of classical vectors; it is positive because
it concatenates the decoding-map form with the positive coding map.

The Cauchy-Schwarz inequality bounds both the real and imaginary parts:
``||Re (A,B)||^2 <= ||(A,A)|| ||(B,B)||`` and likewise for ``Im``.
Applied to a pair of projections whose commutator has norm 1/2, it
forces the worst-case deviation of every coding scheme above
``(3 - sqrt(5))/4``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channels import CPMap, commutator
from .coding import CodingScheme
from .delta import SearchConfig, delta_effect_form
from .operators import as_matrix, op_norm

__all__ = [
    "CS_DELTA_BOUND",
    "InducedForm",
    "CSCheck",
    "cauchy_schwarz_check",
    "commutator_decomposition_residual",
    "half_commutator_pair",
    "BoundChain",
    "bound_chain",
]

#: smaller root of 1/2 = x + 2x(1-x): the deviation floor from this method
CS_DELTA_BOUND = (3.0 - np.sqrt(5.0)) / 4.0


@dataclass(frozen=True)
class InducedForm:
    """Sesquilinear form attached to a CP map or to a coding scheme."""

    dim: int
    label: str
    pair: Callable[[np.ndarray, np.ndarray], np.ndarray]

    @classmethod
    def of_cpmap(cls, t: CPMap) -> "InducedForm":
        def pair(a, b):
            x = as_matrix(a)
            y = as_matrix(b)
            return t.apply(x.conj().T @ y) - t.apply(x).conj().T @ t.apply(y)

        return cls(dim=t.dim_in, label="cpmap", pair=pair)

    @classmethod
    def of_scheme(cls, s: CodingScheme) -> "InducedForm":
        def pair(a, b):
            x = as_matrix(a)
            y = as_matrix(b)
            mixed = s.d_apply(x.conj().T @ y) - s.d_apply(x).conj() * s.d_apply(y)
            return s.c_apply(mixed)

        return cls(dim=s.d, label="scheme", pair=pair)

    def __call__(self, a, b) -> np.ndarray:
        return self.pair(a, b)


def _real_part(x: np.ndarray) -> np.ndarray:
    return (x + x.conj().T) / 2


def _imag_part(x: np.ndarray) -> np.ndarray:
    return (x - x.conj().T) / 2j


@dataclass(frozen=True)
class CSCheck:
    """One evaluation of the Cauchy-Schwarz inequality pair."""

    re_lhs: float
    im_lhs: float
    rhs: float
    passed: bool

    @property
    def residual(self) -> float:
        """Most positive violation; negative when both inequalities hold."""
        return max(self.re_lhs - self.rhs, self.im_lhs - self.rhs)


def cauchy_schwarz_check(form: InducedForm, a, b, slack: float = 1e-9) -> CSCheck:
    """Evaluate ``||Re(A,B)||² <= ||(A,A)|| ||(B,B)||`` and the Im variant."""
    ab = form(a, b)
    re_lhs = op_norm(_real_part(ab)) ** 2
    im_lhs = op_norm(_imag_part(ab)) ** 2
    rhs = op_norm(form(a, a)) * op_norm(form(b, b))
    passed = re_lhs <= rhs + slack and im_lhs <= rhs + slack
    return CSCheck(re_lhs=re_lhs, im_lhs=im_lhs, rhs=rhs, passed=passed)


def commutator_decomposition_residual(scheme: CodingScheme, x, y) -> float:
    """Residual of the exact commutator decomposition used by the bound chain.

    ``[X,Y]`` equals ``([X,Y] - CD([X,Y])) + C(D(XY) - D(X)D(Y)) -
    C(D(YX) - D(Y)D(X))`` identically, because the classical vectors
    ``D(X)`` and ``D(Y)`` commute under componentwise multiplication.
    The residual is floating-point noise, below 1e-12.
    """
    xm = as_matrix(x)
    ym = as_matrix(y)
    comm = commutator(xm, ym)
    dx = scheme.d_apply(xm)
    dy = scheme.d_apply(ym)
    rhs = (
        comm
        - scheme.cd_apply(comm)
        + scheme.c_apply(scheme.d_apply(xm @ ym) - dx * dy)
        - scheme.c_apply(scheme.d_apply(ym @ xm) - dy * dx)
    )
    return op_norm(comm - rhs)


def half_commutator_pair(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Two rank-1 projections with ``||[X, Y]|| = 1/2``.

    ``X`` projects on a basis vector, ``Y`` on the equal superposition of
    that vector with an orthogonal one; this is the worst commuting pair
    of projections and drives the deviation floor.
    """
    if d < 2:
        raise ValueError(f"need dimension at least 2, got {d}")
    e0 = np.zeros(d, dtype=complex)
    e1 = np.zeros(d, dtype=complex)
    e0[0] = 1.0
    e1[1] = 1.0
    v = (e0 + e1) / np.sqrt(2.0)
    return np.outer(e0, e0.conj()), np.outer(v, v.conj())


@dataclass(frozen=True)
class BoundChain:
    """Numerical audit of the chain ``1/2 <= delta + 2 delta (1 - delta)``."""

    delta_hat: float
    disturbance_term: float
    form_term: float
    implied_bound: float
    commutator_norm: float
    tol: float

    @property
    def disturbance_ok(self) -> bool:
        return self.disturbance_term <= self.delta_hat + self.tol

    @property
    def form_ok(self) -> bool:
        return self.form_term <= 2.0 * self.delta_hat * (1.0 - self.delta_hat) + self.tol

    @property
    def chain_ok(self) -> bool:
        rhs = self.delta_hat + 2.0 * self.delta_hat * (1.0 - self.delta_hat)
        return self.commutator_norm <= rhs + self.tol

    @property
    def bound_ok(self) -> bool:
        return self.delta_hat >= self.implied_bound - 1e-3

    @property
    def all_ok(self) -> bool:
        return self.disturbance_ok and self.form_ok and self.chain_ok and self.bound_ok


def bound_chain(
    scheme: CodingScheme,
    cfg: SearchConfig | None = None,
    tol: float = 1e-6,
) -> BoundChain:
    """Audit every inequality in the deviation bound for one scheme.

    Uses the computed deviation estimate in place of the abstract
    worst-case value; each step then must hold up to the search
    tolerance, and the estimate itself must clear the implied floor
    ``(3 - sqrt(5))/4``.
    """
    x, y = half_commutator_pair(scheme.d)
    comm = commutator(x, y)
    delta_hat = delta_effect_form(scheme, cfg).value
    disturbance = op_norm(comm - scheme.cd_apply(comm))
    form = InducedForm.of_scheme(scheme)
    form_term = 2.0 * op_norm(_imag_part(form(x, y)))
    return BoundChain(
        delta_hat=delta_hat,
        disturbance_term=disturbance,
        form_term=form_term,
        implied_bound=float(CS_DELTA_BOUND),
        commutator_norm=op_norm(comm),
        tol=tol,
    )
