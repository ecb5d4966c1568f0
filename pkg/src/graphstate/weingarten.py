"""Exact and first-order Weingarten functions for Haar unitary integration.

`wg_exact` inverts sigma -> n^(#sigma) under group-algebra convolution on
S_p, exactly, in rational arithmetic.  The inversion is done on conjugacy
classes (both sides are class functions), so the linear system has one row
per cycle type instead of one per permutation.  `wg_asym` is the leading
1/n term used by the asymptotic moment engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .combinatorics import Perm, all_perms, mobius

WG_ORDER_CAP = 6


class SingularWeingartenError(ValueError):
    """n^(#sigma) is not invertible at this dimension (needs n >= p)."""


@dataclass(frozen=True)
class WeingartenTable:
    """Wg(n, .) on S_p as a map cycle-type -> exact rational value."""

    p: int
    n: int
    values: dict

    def __call__(self, sigma: Perm) -> Fraction:
        return self.values[sigma.cycle_type()]

    def by_type(self, cycle_type) -> Fraction:
        return self.values[tuple(cycle_type)]


@lru_cache(maxsize=None)
def _classes(p: int):
    """Conjugacy classes of S_p grouped by cycle type."""
    groups = {}
    for sigma in all_perms(p):
        groups.setdefault(sigma.cycle_type(), []).append(sigma)
    return groups


def wg_exact(p: int, n: int) -> WeingartenTable:
    """Exact Weingarten table at order p and integer dimension n.

    Solves sum_tau Wg(sigma tau^-1) n^(#tau) = delta(sigma, id) over the
    rationals.  Requires n >= p; smaller n makes the Gram matrix singular
    and raises SingularWeingartenError.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if p > WG_ORDER_CAP:
        raise ValueError(f"exact Weingarten capped at p <= {WG_ORDER_CAP}")
    if n < p:
        raise SingularWeingartenError(f"need n >= p for invertibility (n={n}, p={p})")
    return _wg_exact_cached(p, n)


@lru_cache(maxsize=None)
def _wg_exact_cached(p: int, n: int) -> WeingartenTable:
    groups = _classes(p)
    types = sorted(groups)
    t_idx = {t: i for i, t in enumerate(types)}
    reps = {t: groups[t][0] for t in types}

    # G[c][d] = sum over rho in class d of n^(#(rho^-1 sigma_c))
    size = len(types)
    gram = [[Fraction(0)] * size for _ in range(size)]
    for ci, ct in enumerate(types):
        sig = reps[ct]
        for di, dt in enumerate(types):
            total = 0
            for rho in groups[dt]:
                total += n ** (rho.inverse() * sig).num_cycles
            gram[ci][di] = Fraction(total)

    rhs = [Fraction(0)] * size
    rhs[t_idx[tuple([1] * p)]] = Fraction(1)

    sol = _solve_rational(gram, rhs)
    if sol is None:
        raise SingularWeingartenError(f"Gram matrix singular at n={n}, p={p}")
    return WeingartenTable(p=p, n=n, values={t: sol[i] for i, t in enumerate(types)})


def _solve_rational(mat, rhs):
    """Gaussian elimination over Fraction; returns None if singular."""
    size = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(size):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [a[r][size] for r in range(size)]


def wg_asym(p: int, n: float, sigma: Perm) -> float:
    """First-order asymptotic Wg(n, sigma) ~ n^-(p + |sigma|) Mob(sigma)."""
    return float(n) ** (-(p + sigma.length)) * mobius(sigma)


def convolution_defect(table: WeingartenTable, sigma: Perm) -> Fraction:
    """sum_tau Wg(sigma tau^-1) n^(#tau) minus its target delta(sigma, id).

    Zero for every sigma when the table is correct; used as a self-test.
    """
    total = Fraction(0)
    for tau in all_perms(table.p):
        total += table(sigma * tau.inverse()) * table.n ** tau.num_cycles
    target = Fraction(1) if sigma.length == 0 else Fraction(0)
    return total - target
