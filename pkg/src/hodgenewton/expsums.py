"""Exponential sums of Laurent polynomials over tori (F_{q^k}^*)^n.

Two routes compute the same counts N_c = #{x : Tr f(x) = c}:

* ``reference``: direct enumeration with :class:`ExtensionField` arithmetic.
* ``fast``: discrete-log tables for a primitive element g.  Since f has F_p
  coefficients, Tr(f(x)) = sum_I Tr(a_I x^I) and each Tr(a_I x^I) is a table
  lookup at an exponent of g.  Large jobs run in a numba kernel that merges
  monomials sharing an inner exponent with Zech logarithms and sums one
  coordinate only over Frobenius orbit representatives.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .cyclotomic import CyclotomicNumber
from .errors import BudgetExceededError, PreconditionError, ValidationError
from .fields import DEFAULT_TORUS_BUDGET, ExtensionField, find_primitive, torus_points
from .laurent import LaurentPolynomial

log = logging.getLogger(__name__)

# above this many torus points the numba kernel replaces plain numpy broadcasting
NUMPY_LIMIT = 2_000_000


def torus_size(p: int, m: int, n: int) -> int:
    return (p**m - 1) ** n


def check_budget(f: LaurentPolynomial, degrees, q_degree: int = 1, budget: int = DEFAULT_TORUS_BUDGET) -> int:
    """Refuse when any S_k needs more than ``budget`` torus evaluations.

    Returns the total number of evaluations over all requested k.
    """
    degrees = list(degrees)
    sizes = {k: torus_size(f.p, q_degree * k, f.n_vars) for k in degrees}
    total = sum(sizes.values())
    worst = max(sizes.values(), default=0)
    if worst > budget:
        feasible = [k for k in sorted(sizes) if sizes[k] <= budget]
        trunc = 0
        for k in sorted(sizes):
            if sizes[k] > budget:
                break
            trunc = k
        raise BudgetExceededError(
            f"exponential sums for k = {min(degrees)}..{max(degrees)} need {total} torus evaluations "
            f"in total (largest single sum: {worst}); budget per sum is {budget}; "
            f"feasible truncation: k <= {trunc}" + ("" if feasible else " (none)"),
            total, budget)
    return total


# -- tables -------------------------------------------------------------------------

@dataclass(frozen=True)
class LogTables:
    p: int
    m: int
    modulus: tuple[int, ...]
    trace: np.ndarray   # trace[e] = Tr(g^e), e in [0, M)
    log: np.ndarray     # log[code] for code = sum digit_i p^i; log[0] = -1
    zech: np.ndarray    # g^zech[e] = 1 + g^e, -1 when 1 + g^e = 0

    @property
    def order(self) -> int:
        return self.p**self.m - 1

    def log_of_prime_field(self, a: int) -> int:
        return int(self.log[a % self.p])


def _mult_matrix(p: int, modulus, power: int) -> np.ndarray:
    """Matrix (acting on digit row vectors) of multiplication by x^power."""
    fld = ExtensionField(p, len(modulus) - 1, modulus)
    xp = fld.gen() ** power
    rows = [(fld([0] * i + [1]) * xp).vector() for i in range(fld.m)]
    return np.array(rows, dtype=np.int64)


@lru_cache(maxsize=16)
def log_tables(p: int, m: int) -> LogTables:
    modulus = tuple(find_primitive(p, m))
    order = p**m - 1
    digits = np.zeros((1, m), dtype=np.int64)
    digits[0, 0] = 1
    while digits.shape[0] < order:
        step = digits.shape[0]
        nxt = (digits @ _mult_matrix(p, modulus, step)) % p
        digits = np.vstack([digits, nxt])
    digits = digits[:order]
    fld = ExtensionField(p, m, modulus)
    basis_trace = np.array([fld.trace(fld([0] * i + [1])) for i in range(m)], dtype=np.int64)
    trace = ((digits @ basis_trace) % p).astype(np.int64)
    weights = p ** np.arange(m, dtype=np.int64)
    codes = digits @ weights
    logs = np.full(p**m, -1, dtype=np.int64)
    logs[codes] = np.arange(order, dtype=np.int64)
    plus_one = digits.copy()
    plus_one[:, 0] = (plus_one[:, 0] + 1) % p
    zech = logs[plus_one @ weights]
    return LogTables(p, m, modulus, trace, logs, zech)


# -- kernels --------------------------------------------------------------------------

def _counts_numpy(f: LaurentPolynomial, tab: LogTables) -> np.ndarray:
    mod = tab.order
    n = f.n_vars
    grids = np.meshgrid(*[np.arange(mod, dtype=np.int64)] * n, indexing="ij", sparse=True)
    s = np.zeros([mod] * n, dtype=np.int64)
    for exp, c in f.terms.items():
        idx = tab.log_of_prime_field(c)
        for g, e in zip(grids, exp):
            if e:
                idx = idx + (e % mod) * g
        s = s + tab.trace[np.asarray(idx) % mod]
    return np.bincount((s % f.p).ravel(), minlength=f.p)


@lru_cache(maxsize=16)
def _frobenius_reps(p: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    seen = np.zeros(order, dtype=bool)
    reps, sizes = [], []
    for j in range(order):
        if seen[j]:
            continue
        size = 0
        cur = j
        while not seen[cur]:
            seen[cur] = True
            size += 1
            cur = cur * p % order
        reps.append(j)
        sizes.append(size)
    return np.array(reps, dtype=np.int64), np.array(sizes, dtype=np.int64)


def _inner_loops(njit):
    """Specialized inner sums over one coordinate for 1..4 monomial groups."""
    u = np.uint64

    @njit(cache=True)
    def inner1(trace, mod, idx, step, local):
        m = u(mod)
        i0, s0 = u(idx[0]), u(step[0])
        for _ in range(mod):
            local[trace[i0]] += 1
            i0 += s0
            if i0 >= m:
                i0 -= m

    @njit(cache=True)
    def inner2(trace, mod, idx, step, local):
        m = u(mod)
        i0, s0 = u(idx[0]), u(step[0])
        i1, s1 = u(idx[1]), u(step[1])
        for _ in range(mod):
            local[u(trace[i0]) + u(trace[i1])] += 1
            i0 += s0
            if i0 >= m:
                i0 -= m
            i1 += s1
            if i1 >= m:
                i1 -= m

    @njit(cache=True)
    def inner3(trace, mod, idx, step, local):
        m = u(mod)
        i0, s0 = u(idx[0]), u(step[0])
        i1, s1 = u(idx[1]), u(step[1])
        i2, s2 = u(idx[2]), u(step[2])
        for _ in range(mod):
            local[u(trace[i0]) + u(trace[i1]) + u(trace[i2])] += 1
            i0 += s0
            if i0 >= m:
                i0 -= m
            i1 += s1
            if i1 >= m:
                i1 -= m
            i2 += s2
            if i2 >= m:
                i2 -= m

    @njit(cache=True)
    def inner4(trace, mod, idx, step, local):
        m = u(mod)
        i0, s0 = u(idx[0]), u(step[0])
        i1, s1 = u(idx[1]), u(step[1])
        i2, s2 = u(idx[2]), u(step[2])
        i3, s3 = u(idx[3]), u(step[3])
        for _ in range(mod):
            local[u(trace[i0]) + u(trace[i1]) + u(trace[i2]) + u(trace[i3])] += 1
            i0 += s0
            if i0 >= m:
                i0 -= m
            i1 += s1
            if i1 >= m:
                i1 -= m
            i2 += s2
            if i2 >= m:
                i2 -= m
            i3 += s3
            if i3 >= m:
                i3 -= m

    @njit(cache=True)
    def inner_any(trace, mod, idx, step, active, local):
        m = u(mod)
        for _ in range(mod):
            s = u(0)
            for a in range(active):
                j = u(idx[a])
                s += u(trace[j])
                j += u(step[a])
                if j >= m:
                    j -= m
                idx[a] = j
            local[s] += 1

    return inner1, inner2, inner3, inner4, inner_any


@lru_cache(maxsize=1)
def _numba_kernel():
    from numba import njit, prange

    inner1, inner2, inner3, inner4, inner_any = _inner_loops(njit)

    @njit(cache=True)
    def zech_add(la, lb, zech, mod):
        if la < 0:
            return lb
        if lb < 0:
            return la
        d = lb - la
        if d < 0:
            d += mod
        z = zech[d]
        if z < 0:
            return -1
        r = la + z
        if r >= mod:
            r -= mod
        return r

    @njit(cache=True, parallel=True)
    def kernel(trace, zech, mod, group_exp, group_start, term_log, term_outer, reps, rep_weight, nbins, nchunks):
        n_groups = group_exp.shape[0]
        n_out = term_outer.shape[1]
        n_free = max(n_out - 1, 0)
        free_size = 1
        for _ in range(n_free):
            free_size *= mod
        n_rep = reps.shape[0]
        total = n_rep * free_size
        counts = np.zeros((nchunks, nbins), dtype=np.int64)
        for chunk in prange(nchunks):
            lo = total * chunk // nchunks
            hi = total * (chunk + 1) // nchunks
            idx = np.empty(n_groups, dtype=np.int64)
            step = np.empty(n_groups, dtype=np.int64)
            e_out = np.zeros(max(n_out, 1), dtype=np.int64)
            local = np.zeros(nbins, dtype=np.int64)
            for o in range(lo, hi):
                r = o // free_size
                rest = o % free_size
                for v in range(n_free):
                    e_out[v] = rest % mod
                    rest //= mod
                if n_out > 0:
                    e_out[n_out - 1] = reps[r]
                active = 0
                for g in range(n_groups):
                    lg = -1
                    for t in range(group_start[g], group_start[g + 1]):
                        lt = term_log[t]
                        for v in range(n_out):
                            lt = (lt + term_outer[t, v] * e_out[v]) % mod
                        lg = zech_add(lg, lt, zech, mod)
                    if lg >= 0:
                        idx[active] = lg
                        step[active] = group_exp[g]
                        active += 1
                local[:] = 0
                if active == 0:
                    local[0] = mod
                elif active == 1:
                    inner1(trace, mod, idx, step, local)
                elif active == 2:
                    inner2(trace, mod, idx, step, local)
                elif active == 3:
                    inner3(trace, mod, idx, step, local)
                elif active == 4:
                    inner4(trace, mod, idx, step, local)
                else:
                    inner_any(trace, mod, idx, step, active, local)
                w = rep_weight[r]
                for b in range(nbins):
                    counts[chunk, b] += local[b] * w
        return counts

    return kernel


def _counts_numba(f: LaurentPolynomial, tab: LogTables) -> np.ndarray:
    mod = tab.order
    p = f.p
    n = f.n_vars
    exps = f.exponents
    # inner coordinate: the variable with the fewest distinct exponents
    inner = min(range(n), key=lambda v: (len({e[v] for e in exps}), v))
    outer = [v for v in range(n) if v != inner]
    groups: dict[int, list] = {}
    for e, c in f.terms.items():
        groups.setdefault(e[inner] % mod, []).append((e, c))
    group_exp = np.array(sorted(groups), dtype=np.int64)
    group_start = [0]
    term_log, term_outer = [], []
    for ge in group_exp:
        for e, c in groups[int(ge)]:
            term_log.append(tab.log_of_prime_field(c))
            term_outer.append([e[v] % mod for v in outer])
        group_start.append(len(term_log))
    if n >= 2:
        reps, weights = _frobenius_reps(p, mod)
    else:
        reps, weights = np.zeros(1, dtype=np.int64), np.ones(1, dtype=np.int64)
    n_out = len(outer)
    term_outer_arr = np.array(term_outer, dtype=np.int64).reshape(len(term_log), n_out)
    nbins = len(group_exp) * (p - 1) + 1
    total = len(reps) * mod ** max(n_out - 1, 0)
    nchunks = int(min(total, 256))
    trace = tab.trace.astype(np.int8)
    with warnings.catch_warnings():
        # numba probes an old TBB on first launch and falls back to another layer
        warnings.filterwarnings("ignore", message=".*TBB.*")
        counts = _numba_kernel()(
            trace, tab.zech, mod, group_exp, np.array(group_start, dtype=np.int64),
            np.array(term_log, dtype=np.int64), term_outer_arr, reps, weights, nbins, nchunks)
    binned = counts.sum(axis=0)
    out = np.zeros(p, dtype=np.int64)
    for b, v in enumerate(binned):
        out[b % p] += v
    return out


def torus_counts(f: LaurentPolynomial, k: int, q_degree: int = 1, budget: int = DEFAULT_TORUS_BUDGET,
                 method: str = "auto") -> list[int]:
    """Counts N_c, c in F_p, of torus points x in (F_{q^k}^*)^n with Tr f(x) = c."""
    f.require_nonzero()
    m = q_degree * k
    check_budget(f, [k], q_degree, budget)
    if method == "reference":
        return _counts_reference(f, m, budget)
    tab = log_tables(f.p, m)
    if method == "numpy" or (method == "auto" and tab.order ** f.n_vars <= NUMPY_LIMIT):
        counts = _counts_numpy(f, tab)
    elif method in ("numba", "auto"):
        counts = _counts_numba(f, tab)
    else:
        raise ValueError(f"unknown method {method!r}")
    return [int(x) for x in counts]


def _counts_reference(f: LaurentPolynomial, m: int, budget: int) -> list[int]:
    fld = ExtensionField(f.p, m)
    counts = [0] * f.p
    for pt in torus_points(fld, f.n_vars, budget):
        counts[fld.trace(f(pt))] += 1
    return counts


def exp_sum_torus(f: LaurentPolynomial, k: int, q_degree: int = 1, budget: int = DEFAULT_TORUS_BUDGET,
                  method: str = "auto") -> CyclotomicNumber:
    """S_k = sum over (F_{q^k}^*)^n of zeta_p^{Tr f(x)}."""
    return CyclotomicNumber.from_counts(f.p, torus_counts(f, k, q_degree, budget, method))


def exp_sum_affine(f: LaurentPolynomial, k: int, q_degree: int = 1, budget: int = DEFAULT_TORUS_BUDGET,
                   method: str = "auto") -> CyclotomicNumber:
    """Sum over all of F_{q^k}^n, split by which coordinates vanish."""
    if not f.is_polynomial():
        raise ValidationError("affine exponential sums need a polynomial without negative exponents")
    p = f.p
    n = f.n_vars
    total = CyclotomicNumber.from_int(p, 0)
    for r in range(n + 1):
        for zero_vars in combinations(range(n), r):
            live = [v for v in range(n) if v not in zero_vars]
            g = f.set_zero(zero_vars)
            if not live:
                const = g.terms.get((0,) * n, 0)
                total = total + CyclotomicNumber.zeta(p, q_degree * k * const)
                continue
            sub = LaurentPolynomial(len(live), p, {tuple(e[v] for v in live): c for e, c in g.terms.items()})
            if sub.is_zero:
                total = total + (p ** (q_degree * k) - 1) ** len(live)
                continue
            total = total + exp_sum_torus(sub, k, q_degree, budget, method)
    return total


def set_threads(n: int | None) -> None:
    if not n:
        return
    try:
        import numba
    except ImportError as exc:  # pragma: no cover
        raise PreconditionError("thread control requires numba") from exc
    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
