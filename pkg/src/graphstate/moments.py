"""Moment engines and limit-law classification for graph-state marginals.

Two independent routes to the same quantities:

* `asymptotic_moment` enumerates the minimizing tuples of geodesic
  permutations (one per vertex block) whose cost functional saturates the
  max-flow bound X(p-1), and sums their dimension weights exactly.
* `exact_moment` evaluates the full finite-N Haar average as a double
  sum over permutation tuples against exact Weingarten tables.

The closed-form family classifiers (single surviving vertex, stars,
cycles) and the conservative moment-matching `classify` sit on top.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .combinatorics import (
    ConstraintPoset,
    NCPartition,
    Perm,
    all_perms,
    catalan,
    count_poset_tuples,
    enumerate_nc,
    fuss_catalan,
    mp_moment_exact,
    nc_to_geodesic,
)
from .flow import build_network, max_flow
from .graphs import MarginalSpec
from .weingarten import wg_exact

TUPLES_BUDGET_DEFAULT = 5_000_000
TERMS_BUDGET_DEFAULT = 10_000_000
TUPLES_BUDGET_ENV = "GRAPHSTATE_BUDGET_TUPLES"
TERMS_BUDGET_ENV = "GRAPHSTATE_BUDGET_TERMS"


class BudgetExceededError(RuntimeError):
    """Enumeration would exceed the configured work budget."""

    def __init__(self, message, estimated):
        super().__init__(message)
        self.estimated = estimated


class MinimizerConsistencyError(AssertionError):
    """The enumerated minimum disagrees with the max-flow bound."""


def tuples_budget(override=None) -> int:
    if override is not None:
        return int(override)
    return int(os.environ.get(TUPLES_BUDGET_ENV, TUPLES_BUDGET_DEFAULT))


def terms_budget(override=None) -> int:
    if override is not None:
        return int(override)
    return int(os.environ.get(TERMS_BUDGET_ENV, TERMS_BUDGET_DEFAULT))


# ---------------------------------------------------------------------------
# the cost functional and its minimizers
# ---------------------------------------------------------------------------

def f_beta(marginal: MarginalSpec, betas, p: int) -> int:
    """Cost of a full tuple of permutations, one per vertex block.

    sum_i |kept_i| |gamma^-1 b_i| + |traced_i| |b_i|
    + sum_{i<j} (bonds between i,j) * |b_i^-1 b_j|.
    """
    betas = list(betas)
    if len(betas) != marginal.k:
        raise ValueError(f"need {marginal.k} permutations, got {len(betas)}")
    gamma = Perm.full_cycle(p)
    total = 0
    for i, view in enumerate(marginal.blocks):
        b = betas[i]
        total += len(view.kept) * (gamma * b.inverse()).length
        total += len(view.traced) * b.length
    for (i, j), bonds in marginal.cross_bonds.items():
        total += len(bonds) * (betas[i].inverse() * betas[j]).length
    return total


@dataclass
class MinimizerSet:
    """All geodesic tuples achieving the max-flow cost bound.

    `tuples` holds NC(p)-indices per block (into `partitions`); pinned
    blocks are fixed at the discrete / full partition according to type.
    """

    p: int
    x: int
    partitions: tuple          # enumerate_nc(p), shared index space
    tuples: list               # list of tuples of partition indices
    pinned: dict               # block -> "zero" | "one"

    def __len__(self):
        return len(self.tuples)

    def as_partitions(self, t):
        return tuple(self.partitions[i] for i in t)


@lru_cache(maxsize=None)
def _nc_tables(p: int):
    """Shared per-order tables: partitions, geodesics, length vectors."""
    parts = enumerate_nc(p)
    perms = [nc_to_geodesic(q) for q in parts]
    gamma = Perm.full_cycle(p)
    len_beta = [sig.length for sig in perms]
    len_to_gamma = [(gamma * sig.inverse()).length for sig in perms]
    idx_zero = parts.index(NCPartition.zero(p))
    idx_one = parts.index(NCPartition.one(p))
    return parts, perms, len_beta, len_to_gamma, idx_zero, idx_one


@lru_cache(maxsize=None)
def _nc_pair_lengths(p: int):
    """|a^-1 b| over all geodesic pairs; quadratic in catalan(p), built lazily."""
    _, perms, _, _, _, _ = _nc_tables(p)
    return [[(a.inverse() * b).length for b in perms] for a in perms]


def minimizer_set(marginal: MarginalSpec, p: int, budget=None) -> MinimizerSet:
    """Enumerate the minimizing geodesic tuples at order p.

    Fully traced blocks are pinned to the identity, fully kept blocks to
    the long cycle; the remaining blocks range over all of NC(p).  Kept
    are exactly the tuples whose cost equals X(p-1) where X is the max
    flow; the enumerated minimum is checked against that bound.
    """
    x = max_flow(build_network(marginal)).value
    target = x * (p - 1)
    parts, perms, len_beta, len_to_gamma, idx_zero, idx_one = _nc_tables(p)

    pinned = {}
    free = []
    for i, view in enumerate(marginal.blocks):
        if view.kind == "T":
            pinned[i] = "zero"
        elif view.kind == "S":
            pinned[i] = "one"
        else:
            free.append(i)

    k = marginal.k
    cross = {pair: len(bonds) for pair, bonds in marginal.cross_bonds.items()}

    est = len(parts) ** len(free) + (len(parts) ** 2 if cross else 0)
    cap = tuples_budget(budget)
    if est > cap:
        raise BudgetExceededError(
            f"minimizer search needs ~{est} table entries (> budget {cap}); "
            f"lower p or raise {TUPLES_BUDGET_ENV}", est)
    pair_len = _nc_pair_lengths(p) if cross else None
    kept_w = [len(v.kept) for v in marginal.blocks]
    traced_w = [len(v.traced) for v in marginal.blocks]

    # assignment order: pinned blocks first (their cost is a constant),
    # then free blocks; cross terms are charged when the later block lands
    order = sorted(pinned) + free
    pos = {blk: t for t, blk in enumerate(order)}
    earlier_cross = [[] for _ in order]
    for (a, b), weight in cross.items():
        later, earlier = (a, b) if pos[a] > pos[b] else (b, a)
        earlier_cross[pos[later]].append((pos[earlier], weight))

    choices = []
    for blk in order:
        if blk in pinned:
            choices.append((idx_zero,) if pinned[blk] == "zero" else (idx_one,))
        else:
            choices.append(tuple(range(len(parts))))

    best = [None]
    hits = []
    assign = [0] * k

    def rec(t, cost):
        if cost > target:
            return
        if t == k:
            if best[0] is None or cost < best[0]:
                best[0] = cost
            if cost == target:
                hits.append(tuple(assign))
            return
        blk = order[t]
        for c in choices[t]:
            step = kept_w[blk] * len_to_gamma[c] + traced_w[blk] * len_beta[c]
            for other_t, weight in earlier_cross[t]:
                step += weight * pair_len[assign[other_t]][c]
            assign[t] = c
            rec(t + 1, cost + step)
        return

    rec(0, 0)

    if best[0] != target:
        raise MinimizerConsistencyError(
            f"enumerated minimum {best[0]} != X(p-1) = {target} at p={p}")

    # restore block order inside each tuple
    unscramble = [pos[blk] for blk in range(k)]
    tuples = [tuple(hit[unscramble[blk]] for blk in range(k)) for hit in hits]
    return MinimizerSet(p=p, x=x, partitions=parts, tuples=tuples,
                        pinned={blk: pin for blk, pin in pinned.items()})


# ---------------------------------------------------------------------------
# asymptotic moments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentReport:
    """Leading term of the p-th moment: coefficient * N^exponent."""

    p: int
    exponent: int
    coefficient: Fraction
    minimizer_count: int

    def value_at(self, n: float) -> float:
        return float(self.coefficient) * float(n) ** self.exponent


def asymptotic_moment(marginal: MarginalSpec, p: int, budget=None) -> MomentReport:
    """Exact leading coefficient of E tr(rho^p) and its N-exponent.

    The sum runs over the minimizer set; each tuple contributes a product
    of dimension factors raised to cycle counts.  The loop-bond factor and
    the global square-root normalization are included, which forces the
    p=1 report to (0, 1) for every valid marginal.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    mins = minimizer_set(marginal, p, budget=budget)
    parts = mins.partitions
    n_parts = len(parts)
    num_blocks = [q.num_blocks for q in parts]
    kw = [p + 1 - nb for nb in num_blocks]  # #(gamma^-1 beta) = p + 1 - #beta

    blocks = marginal.blocks
    cross_dims = {pair: marginal.cross_dim(*pair) for pair in marginal.cross_bonds
                  if marginal.cross_dim(*pair) != 1}
    # pair cycle counts #(b_i^-1 b_j) only matter for weighted cross bonds
    pair_len = _nc_pair_lengths(p) if cross_dims else None

    total = Fraction(0)
    for t in mins.tuples:
        term = Fraction(1)
        for i, view in enumerate(blocks):
            c = t[i]
            term *= Fraction(view.dim_kept) ** kw[c]
            term *= Fraction(view.dim_traced) ** num_blocks[c]
            term /= Fraction(view.dim_block) ** p
        for (i, j), dprod in cross_dims.items():
            term *= Fraction(dprod) ** (p - pair_len[t[i]][t[j]])
        total += term

    prefactor = Fraction(1, marginal.dim_all_sqrt ** p)
    for view in blocks:
        prefactor *= Fraction(view.dim_loops) ** p
    coeff = prefactor * total
    return MomentReport(p=p, exponent=-mins.x * (p - 1), coefficient=coeff,
                        minimizer_count=len(mins))


def moment_table(marginal: MarginalSpec, p_max: int, budget=None):
    """MomentReports for p = 1..p_max."""
    return [asymptotic_moment(marginal, p, budget=budget) for p in range(1, p_max + 1)]


# ---------------------------------------------------------------------------
# exact finite-N moments
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _perm_tables(p: int):
    """Index tables over S_p: cycle counts, gamma products, pair class ids."""
    perms = all_perms(p)
    gamma = Perm.full_cycle(p)
    ncyc = [sig.num_cycles for sig in perms]
    ncyc_to_gamma = [(gamma * sig.inverse()).num_cycles for sig in perms]
    types = sorted({sig.cycle_type() for sig in perms})
    type_idx = {t: i for i, t in enumerate(types)}
    pair_type = []
    pair_ncyc = []
    for a in perms:
        ainv = a.inverse()
        row_t = []
        row_c = []
        for b in perms:
            prod = ainv * b
            row_t.append(type_idx[prod.cycle_type()])
            row_c.append(prod.num_cycles)
        pair_type.append(row_t)
        pair_ncyc.append(row_c)
    return perms, ncyc, ncyc_to_gamma, types, pair_type, pair_ncyc


def exact_moment(marginal: MarginalSpec, p: int, N: int, budget=None) -> Fraction:
    """E tr(rho^p) at finite N, exactly, via the full Weingarten sum.

    One Weingarten table per vertex block at dimension d_block * N^b; the
    double permutation sum factorizes so each block's first tuple index is
    summed out against its own table before the joint sum over the second.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if N < 1:
        raise ValueError("N must be >= 1")
    k = marginal.k
    est = factorial_pow(p, 2 * k)
    cap = terms_budget(budget)
    if est > cap:
        raise BudgetExceededError(
            f"exact sum has {est} terms (> budget {cap}); "
            f"lower p or raise {TERMS_BUDGET_ENV}", est)

    perms, ncyc, ncyc_gamma, types, pair_type, pair_ncyc = _perm_tables(p)
    n_perm = len(perms)
    blocks = marginal.blocks

    tables = []
    for view in blocks:
        dim = view.dim_block * N ** len(view.members)
        table = wg_exact(p, dim)
        tables.append([table.by_type(t) for t in types])

    # per-block: h[b] = sum_a weight(a) * Wg(a^-1 b), weight from kept/traced factors
    h = []
    for i, view in enumerate(blocks):
        dk = view.dim_kept * N ** len(view.kept)
        dt = view.dim_traced * N ** len(view.traced)
        weight = [dk ** ncyc_gamma[a] * dt ** ncyc[a] for a in range(n_perm)]
        wg_vals = tables[i]
        col = []
        for b in range(n_perm):
            acc = [0] * len(types)
            pt = pair_type
            for a in range(n_perm):
                acc[pt[a][b]] += weight[a]
            col.append(sum(Fraction(acc_t) * wg_vals[ti] for ti, acc_t in enumerate(acc) if acc_t))
        h.append(col)

    cross = []
    for (i, j), bonds in marginal.cross_bonds.items():
        base = marginal.cross_dim(i, j) * N ** len(bonds)
        cross.append((i, j, base))

    total = Fraction(0)
    for combo in itertools.product(range(n_perm), repeat=k):
        term = Fraction(1)
        for i in range(k):
            term *= h[i][combo[i]]
            if term == 0:
                break
        else:
            for i, j, base in cross:
                term *= base ** pair_ncyc[combo[i]][combo[j]]
            total += term

    prefactor = Fraction(1, (marginal.dim_all_sqrt * N ** marginal.graph.m) ** p)
    for view in blocks:
        loops = view.dim_loops * N ** len(view.loop_bonds)
        prefactor *= Fraction(loops) ** p
    return prefactor * total


def exact_moment_gaussian(marginal: MarginalSpec, p: int, N: int, budget=None) -> Fraction:
    """E tr(rho^p) at finite N for the Gaussian-block model, exactly.

    Same contraction structure as `exact_moment` but with Wick pairings:
    a single permutation per block and kernel dim^-p instead of the
    Weingarten factor.  Agrees with the Haar model to leading order in N,
    which makes this the finite-N oracle for the Ginibre sampling mode.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if N < 1:
        raise ValueError("N must be >= 1")
    k = marginal.k
    est = factorial_pow(p, k)
    cap = terms_budget(budget)
    if est > cap:
        raise BudgetExceededError(
            f"Wick sum has {est} terms (> budget {cap}); "
            f"lower p or raise {TERMS_BUDGET_ENV}", est)

    perms, ncyc, ncyc_gamma, types, pair_type, pair_ncyc = _perm_tables(p)
    n_perm = len(perms)
    blocks = marginal.blocks

    weight = []
    for view in blocks:
        dk = view.dim_kept * N ** len(view.kept)
        dt = view.dim_traced * N ** len(view.traced)
        dim = view.dim_block * N ** len(view.members)
        weight.append([Fraction(dk ** ncyc_gamma[b] * dt ** ncyc[b], dim ** p)
                       for b in range(n_perm)])

    cross = []
    for (i, j), bonds in marginal.cross_bonds.items():
        base = marginal.cross_dim(i, j) * N ** len(bonds)
        cross.append((i, j, base))

    total = Fraction(0)
    for combo in itertools.product(range(n_perm), repeat=k):
        term = Fraction(1)
        for i in range(k):
            term *= weight[i][combo[i]]
        for i, j, base in cross:
            term *= base ** pair_ncyc[combo[i]][combo[j]]
        total += term

    prefactor = Fraction(1, (marginal.dim_all_sqrt * N ** marginal.graph.m) ** p)
    for view in blocks:
        loops = view.dim_loops * N ** len(view.loop_bonds)
        prefactor *= Fraction(loops) ** p
    return prefactor * total


def factorial_pow(p: int, e: int) -> int:
    out = 1
    fact = 1
    for i in range(2, p + 1):
        fact *= i
    for _ in range(e):
        out *= fact
    return out


# ---------------------------------------------------------------------------
# distribution identities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistributionId:
    """Tagged identification of a limiting eigenvalue law.

    kind: one of maximally_mixed, dirac, free_poisson, fuss_catalan,
    classical_product, poset_law, unknown.  Payload fields are used per
    kind; unused ones stay None.
    """

    kind: str
    c: Fraction = None            # free_poisson parameter
    s: int = None                 # fuss_catalan order
    factors: tuple = None         # classical_product parts
    poset: ConstraintPoset = None
    rank_coeff: Fraction = None   # maximally_mixed/dirac support ~ coeff * N^exp
    rank_exponent: int = None
    moments: tuple = None         # unknown: raw coefficient sequence

    def describe(self) -> str:
        if self.kind == "maximally_mixed":
            return f"maximally mixed on ~{self.rank_coeff}*N^{self.rank_exponent}"
        if self.kind == "dirac":
            return "unit point mass after rescaling"
        if self.kind == "free_poisson":
            return f"free Poisson (Marchenko-Pastur), c={self.c}"
        if self.kind == "fuss_catalan":
            return f"Fuss-Catalan, order {self.s}"
        if self.kind == "classical_product":
            return " x ".join(f.describe() for f in self.factors)
        if self.kind == "poset_law":
            return f"poset law on {self.poset.relations}"
        return f"unclassified, moments {[str(m) for m in (self.moments or ())]}"

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.c is not None:
            out["c"] = str(self.c)
        if self.s is not None:
            out["s"] = self.s
        if self.factors is not None:
            out["factors"] = [f.to_json() for f in self.factors]
        if self.poset is not None:
            out["poset"] = {"k": self.poset.k, "relations": list(map(list, self.poset.relations))}
        if self.rank_coeff is not None:
            out["rank"] = {"coeff": str(self.rank_coeff), "exponent": self.rank_exponent}
        if self.moments is not None:
            out["moments"] = [str(m) for m in self.moments]
        return out


def _is_geometric(coeffs):
    """coeffs[p-1] == r^(p-1) for some rational r; returns r or None."""
    if len(coeffs) < 2:
        return Fraction(1)
    r = coeffs[1]
    for p, c in enumerate(coeffs, start=1):
        if c != r ** (p - 1):
            return None
    return r


def _match_free_poisson(coeffs):
    """Fit coeffs[p-1] = d^(1-p) c^-p M_p(c) exactly; return (c, d) or None.

    M_p is the NC(p) block-weight sum.  Eliminating d from the p=2,3
    equations leaves a quadratic in 1/c with rational coefficients.
    """
    if len(coeffs) < 3:
        return None
    c2, c3 = coeffs[1], coeffs[2]
    # v = 1/c solves (c3 - c2^2) v^2 + (2 c3 - 3 c2^2) v + (c3 - c2^2) = 0
    a = c3 - c2 ** 2
    b = 2 * c3 - 3 * c2 ** 2
    if a == 0:
        # forces v = 0, i.e. an infinite parameter: not a free Poisson law
        return None
    disc = b * b - 4 * a * a
    if disc < 0:
        return None
    root = _rational_sqrt(disc)
    if root is None:
        return None
    # the sequence determines the law only up to the Wishart aspect-ratio
    # duality (c, d) <-> (1/c, c*d); prefer the atomless c >= 1 description
    roots = sorted({(-b + root) / (2 * a), (-b - root) / (2 * a)})
    for v in roots:
        if v <= 0:
            continue
        c = 1 / v
        d = (1 + v) / c2 if c2 else None
        if d is None or d <= 0:
            continue
        ok = True
        for p, coeff in enumerate(coeffs, start=1):
            predicted = d ** (1 - p) * c ** (-p) * mp_moment_exact(c, p)
            if coeff != predicted:
                ok = False
                break
        if ok:
            return c, d
    return None


def _rational_sqrt(x: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    num = _isqrt_exact(x.numerator)
    den = _isqrt_exact(x.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _isqrt_exact(v: int):
    from math import isqrt
    r = isqrt(v)
    return r if r * r == v else None


def _factorizations(target: int, min_part: int = 2):
    """Multisets of integers >= min_part with the given product."""
    if target == 1:
        yield ()
        return
    for part in range(min_part, target + 1):
        if target % part == 0:
            for rest in _factorizations(target // part, part):
                yield (part,) + rest


def classify(marginal: MarginalSpec, p_max: int = 6, posets=None, budget=None) -> DistributionId:
    """Conservative tag for the limiting law of the rescaled marginal.

    Works purely off the asymptotic coefficient sequence; a family is
    reported only when it reproduces every tested order exactly.  Checks,
    most specific first: flat spectrum (Dirac / maximally mixed), free
    Poisson with rational parameter, Fuss-Catalan, classical products of
    Fuss-Catalan laws, then the supplied label posets.
    """
    reports = moment_table(marginal, p_max, budget=budget)
    coeffs = [r.coefficient for r in reports]
    x = -reports[1].exponent if p_max >= 2 else 0

    r = _is_geometric(coeffs)
    if r is not None:
        if r == 1:
            return DistributionId(kind="dirac", rank_coeff=Fraction(1), rank_exponent=x)
        return DistributionId(kind="maximally_mixed", rank_coeff=1 / r, rank_exponent=x)

    mp = _match_free_poisson(coeffs)
    if mp is not None:
        c, scale = mp
        return DistributionId(kind="free_poisson", c=c,
                              rank_coeff=scale, rank_exponent=x)

    for s in range(2, max(p_max, 8) + 1):
        if all(coeffs[p - 1] == fuss_catalan(s, p) for p in range(1, p_max + 1)):
            return DistributionId(kind="fuss_catalan", s=s)

    c2 = coeffs[1] if len(coeffs) > 1 else None
    if c2 is not None and c2.denominator == 1 and c2 > 1:
        for combo in _factorizations(int(c2)):
            orders = tuple(part - 1 for part in combo)
            if len(orders) < 2:
                continue
            if all(coeffs[p - 1] == _product_fc(orders, p) for p in range(1, p_max + 1)):
                factors = tuple(
                    DistributionId(kind="free_poisson", c=Fraction(1)) if s == 1
                    else DistributionId(kind="fuss_catalan", s=s)
                    for s in orders)
                return DistributionId(kind="classical_product", factors=factors)

    candidates = list(posets) if posets is not None else [
        ConstraintPoset(k=3, relations=[(0, 1), (0, 2)]),
    ]
    for poset in candidates:
        try:
            if all(coeffs[p - 1] == count_poset_tuples(poset, p) for p in range(1, p_max + 1)):
                return DistributionId(kind="poset_law", poset=poset)
        except Exception:
            continue

    return DistributionId(kind="unknown", moments=tuple(coeffs))


def _product_fc(orders, p: int) -> int:
    out = 1
    for s in orders:
        out *= fuss_catalan(s, p)
    return out


def law_moments(dist: DistributionId, p_max: int):
    """Raw coefficient sequence a tagged law implies, for round-trip checks.

    Inverts what `classify` matched: flat spectra give geometric
    sequences in the support scale, a free Poisson tag reproduces its
    weighted lattice sums, and the counting families return their counts.
    Raises ValueError for the unknown tag.
    """
    ps = range(1, p_max + 1)
    if dist.kind == "dirac":
        return [Fraction(1) for _ in ps]
    if dist.kind == "maximally_mixed":
        return [Fraction(dist.rank_coeff) ** (1 - p) for p in ps]
    if dist.kind == "free_poisson":
        scale = Fraction(dist.rank_coeff if dist.rank_coeff is not None else 1)
        c = Fraction(dist.c)
        return [scale ** (1 - p) * c ** -p * mp_moment_exact(c, p) for p in ps]
    if dist.kind == "fuss_catalan":
        return [Fraction(fuss_catalan(dist.s, p)) for p in ps]
    if dist.kind == "classical_product":
        seqs = [law_moments(f, p_max) for f in dist.factors]
        out = []
        for idx in range(p_max):
            prod = Fraction(1)
            for seq in seqs:
                prod *= seq[idx]
            out.append(prod)
        return out
    if dist.kind == "poset_law":
        return [Fraction(count_poset_tuples(dist.poset, p)) for p in ps]
    raise ValueError(f"no moment rule for tag {dist.kind!r}")


# ---------------------------------------------------------------------------
# closed-form families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyReport:
    """Closed-form prediction for one of the solved families.

    entropy(N) is the leading expression in natural log; purity terms are
    (coefficient, exponent) for coefficient * N^exponent.
    """

    law: DistributionId
    flow: int
    entropy_log_term: int          # multiplies ln N
    entropy_constant: float
    purity_coeff: Fraction
    purity_exponent: int
    exact_at_finite_n: bool = False
    rescale_note: str = ""

    def entropy(self, n: float) -> float:
        return self.entropy_log_term * math.log(n) + self.entropy_constant

    def purity(self, n: float) -> float:
        return float(self.purity_coeff) * float(n) ** self.purity_exponent


def one_unitary_marginal(kept: int, traced_in_block: int, external: int,
                         d_kept: int = 1, d_traced: int = 1, d_external: int = 1) -> FamilyReport:
    """Marginal whose surviving subsystems sit inside a single vertex.

    `kept` and `traced_in_block` count subsystems of the surviving vertex
    that are kept / traced; `external` counts its bonds to other (fully
    traced) vertices.  Loop bonds inside the vertex account for the rest.
    The comparison of kept against traced_in_block + external decides
    between a flat spectrum on the smaller side and a free Poisson limit
    at the critical point.
    """
    if kept < 0 or traced_in_block < 0 or external < 0:
        raise ValueError("cardinalities must be nonnegative")
    if kept == 0:
        raise ValueError("need at least one kept subsystem")
    from .spectra import mp_entropy

    env = traced_in_block + external
    d_env = d_traced * d_external

    if traced_in_block == 0:
        # nothing of the surviving vertex is traced: rho is exactly a
        # normalized Haar projector of rank d_external * N^external
        law = DistributionId(kind="maximally_mixed", rank_coeff=Fraction(d_external),
                             rank_exponent=external)
        return FamilyReport(law=law, flow=min(kept, external),
                            entropy_log_term=external,
                            entropy_constant=math.log(d_external),
                            purity_coeff=Fraction(1, d_external),
                            purity_exponent=-external,
                            exact_at_finite_n=True)

    if kept < env:
        law = DistributionId(kind="maximally_mixed", rank_coeff=Fraction(d_kept),
                             rank_exponent=kept)
        return FamilyReport(law=law, flow=kept, entropy_log_term=kept,
                            entropy_constant=math.log(d_kept),
                            purity_coeff=Fraction(1, d_kept), purity_exponent=-kept)

    if kept == env:
        c = Fraction(d_env, d_kept)
        law = DistributionId(kind="free_poisson", c=c,
                             rank_coeff=Fraction(d_kept), rank_exponent=kept)
        return FamilyReport(
            law=law, flow=kept, entropy_log_term=kept,
            entropy_constant=math.log(d_env) + mp_entropy(c) / float(c),
            purity_coeff=Fraction(d_kept) * (c ** 2 + c) / (d_env ** 2),
            purity_exponent=-kept,
            rescale_note=f"rescale by {d_env}*N^{kept}")

    law = DistributionId(kind="maximally_mixed", rank_coeff=Fraction(d_env),
                         rank_exponent=env)
    return FamilyReport(law=law, flow=env, entropy_log_term=env,
                        entropy_constant=math.log(d_env),
                        purity_coeff=Fraction(1, d_env), purity_exponent=-env)


def star_marginal(m: int, s: int, t: int) -> FamilyReport:
    """Limit law and entropy/purity forecast for an m-star marginal.

    s satellites and t center subsystems survive.  Branches: an empty
    side is exactly maximally mixed at every N; an unbalanced trace gives
    a flat limit on the smaller side; the balanced case s+t = m gives the
    square-case free Poisson law.
    """
    if not (0 <= s <= m and 0 <= t <= m):
        raise ValueError(f"need 0 <= s,t <= m; got s={s}, t={t}")
    if s == 0 or t == 0:
        r = max(s, t)
        law = DistributionId(kind="maximally_mixed", rank_coeff=Fraction(1), rank_exponent=r)
        return FamilyReport(law=law, flow=r, entropy_log_term=r, entropy_constant=0.0,
                            purity_coeff=Fraction(1), purity_exponent=-r,
                            exact_at_finite_n=True)
    if s + t < m:
        law = DistributionId(kind="dirac", rank_coeff=Fraction(1), rank_exponent=s + t)
        return FamilyReport(law=law, flow=s + t, entropy_log_term=s + t,
                            entropy_constant=0.0, purity_coeff=Fraction(1),
                            purity_exponent=-(s + t),
                            rescale_note=f"rescale by N^{s+t}")
    if s + t > m:
        r = 2 * m - s - t
        law = DistributionId(kind="dirac", rank_coeff=Fraction(1), rank_exponent=r)
        return FamilyReport(law=law, flow=r, entropy_log_term=r, entropy_constant=0.0,
                            purity_coeff=Fraction(1), purity_exponent=-r,
                            rescale_note=f"rank N^{r}; rescale by N^{r}")
    law = DistributionId(kind="free_poisson", c=Fraction(1))
    return FamilyReport(law=law, flow=m, entropy_log_term=m, entropy_constant=-0.5,
                        purity_coeff=Fraction(2), purity_exponent=-m,
                        rescale_note=f"rescale by N^{m}")


def cycle_marginal(types: str) -> FamilyReport:
    """Limit law for a cycle marginal given its vertex type string.

    Arcs are the paths from a fully traced vertex to a fully kept one
    whose interior vertices each lose exactly one subsystem; every arc
    contributes an independent Fuss-Catalan factor of order equal to its
    interior length (length 0 contributes the trivial factor).  The flow
    is the number of single-loss vertices plus the number of arcs.
    """
    m = len(types)
    if m < 2:
        raise ValueError("cycle needs at least 2 vertices")
    if any(ch not in "SRT" for ch in types):
        raise ValueError(f"types must be over S/R/T, got {types!r}")

    if set(types) == {"R"}:
        # no fully traced or fully kept vertex pins anything: the block
        # labels must all coincide but range over the whole lattice, so
        # the ring behaves like a single square-case vertex
        law = DistributionId(kind="free_poisson", c=Fraction(1))
        return FamilyReport(law=law, flow=m, entropy_log_term=m,
                            entropy_constant=-0.5, purity_coeff=Fraction(2),
                            purity_exponent=-m,
                            rescale_note=f"rescale by N^{m}")

    arcs = _cycle_arcs(types)
    k_r = types.count("R")
    x = k_r + len(arcs)

    orders = sorted((a for a in arcs if a > 0), reverse=True)
    if not orders:
        law = DistributionId(kind="dirac", rank_coeff=Fraction(1), rank_exponent=x)
    elif len(orders) == 1:
        s = orders[0]
        law = (DistributionId(kind="free_poisson", c=Fraction(1)) if s == 1
               else DistributionId(kind="fuss_catalan", s=s))
    else:
        law = DistributionId(kind="classical_product", factors=tuple(
            DistributionId(kind="free_poisson", c=Fraction(1)) if s == 1
            else DistributionId(kind="fuss_catalan", s=s)
            for s in orders))

    entropy_const = -sum(sum(Fraction(1, j) for j in range(2, a + 2)) for a in orders)
    purity = Fraction(1)
    for a in arcs:
        purity *= fuss_catalan(a, 2)
    return FamilyReport(law=law, flow=x, entropy_log_term=x,
                        entropy_constant=float(entropy_const),
                        purity_coeff=purity, purity_exponent=-x)


def _cycle_arcs(types: str):
    """Interior lengths of all traced-to-kept arcs, scanning both ways."""
    m = len(types)
    arcs = []
    for start_ch, end_ch in (("T", "S"), ("S", "T")):
        for i, ch in enumerate(types):
            if ch != start_ch:
                continue
            run = 0
            j = (i + 1) % m
            while types[j] == "R" and run < m:
                run += 1
                j = (j + 1) % m
            if types[j] == end_ch and j != i:
                arcs.append(run)
    return sorted(arcs, reverse=True)
