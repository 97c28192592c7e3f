"""Test sets for the linear part of the portfolio problem via Gröbner bases.

The linear subproblem is put in equality form ``A y = rhs`` with one slack
per row.  ``A = [A0 | I]`` so its integer kernel is spanned by the columns
``(e_j, -A0 e_j)``.  The reduced Gröbner basis of the lattice ideal of
``ker_Z(A)`` under a cost-compatible term order is a test set for every
fiber ``{y >= 0 : A y = A p}``.

Binomials ``x^u+ - x^u-`` are handled as integer vectors ``u`` (common
factors cancelled), oriented so that ``u+`` is the leading term.  Under the
cost order the leading term is the one with the LOWER return, so:

* reduction ``p -> p - u`` (when ``p >= u+``) never lowers the return;
* ``p -> p + u`` (when ``p + u >= 0``) never raises it; this is the
  reversal move used by the tree search.
"""

import heapq
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import NegativeRhs, RankDeficient, ResourceExhausted

log = logging.getLogger(__name__)

# entries of stored vectors stay below this in int64 mode; sums of two such
# vectors cannot overflow
_INT_LIMIT = 1 << 61
DEFAULT_MAX_PAIRS = 5_000_000


# --------------------------------------------------------------------------
# term orders


TIE_BREAKS = ("revlex", "grevlex")


@dataclass(frozen=True)
class TermOrder:
    """Cost-compatible term order with a reverse-lexicographic tie-break.

    ``u > v`` iff ``cost.u < cost.v``; on ties, if ``graded`` the larger total
    degree wins; remaining ties go to revlex on ``perm`` (u > v iff the last
    nonzero entry of ``u - v``, scanning variables in ``perm`` order, is
    negative).  ``graded=False`` with zero cost is the plain revlex used for
    saturation steps; it is only meaningful between monomials of one fiber,
    which is the only way the completion uses it.
    """

    cost: tuple
    perm: tuple
    graded: bool = True

    @classmethod
    def cost_grevlex(cls, cost, perm=None):
        cost = tuple(int(c) for c in cost)
        if perm is None:
            perm = tuple(range(len(cost)))
        return cls(cost, tuple(perm), True)

    @classmethod
    def cost_revlex(cls, cost):
        """Cost order with plain revlex ties, scanning ``x1`` last.

        On ties this prefers points holding more of the low-index assets and
        more slack; it makes every equal-return swap towards a lower-index
        asset a single test vector, which keeps bases small when assets have
        equal returns.
        """
        cost = tuple(int(c) for c in cost)
        return cls(cost, tuple(range(len(cost)))[::-1], False)

    @classmethod
    def from_name(cls, cost, tie_break):
        if tie_break == "revlex":
            return cls.cost_revlex(cost)
        if tie_break == "grevlex":
            return cls.cost_grevlex(cost)
        raise ValueError(f"unknown tie-break {tie_break!r}; expected one of {TIE_BREAKS}")

    @classmethod
    def revlex_last(cls, nvars, last):
        perm = tuple(i for i in range(nvars) if i != last) + (last,)
        return cls((0,) * nvars, perm, False)

    @property
    def nvars(self):
        return len(self.cost)

    def sign(self, r) -> int:
        """+1 if r+ > r-, -1 if r- > r+, 0 if r == 0."""
        c = sum(int(a) * int(b) for a, b in zip(self.cost, r))
        if c:
            return 1 if c < 0 else -1
        if self.graded:
            d = sum(int(x) for x in r)
            if d:
                return 1 if d > 0 else -1
        for i in reversed(self.perm):
            if r[i]:
                return 1 if r[i] < 0 else -1
        return 0

    def signs(self, R: np.ndarray) -> np.ndarray:
        """Row-wise ``sign`` for a 2-D integer array."""
        R = np.asarray(R)
        k = R.shape[0]
        out = np.zeros(k, dtype=np.int64)
        undecided = np.ones(k, dtype=bool)
        if any(self.cost):
            c = R @ np.array(self.cost, dtype=R.dtype)
            out[c < 0] = 1
            out[c > 0] = -1
            undecided &= c == 0
        if self.graded:
            d = R.sum(axis=1)
            m = undecided & (d != 0)
            out[m] = np.where(d[m] > 0, 1, -1)
            undecided &= d == 0
        if undecided.any():
            P = R[:, list(self.perm)[::-1]]
            for row in np.flatnonzero(undecided):
                nz = np.flatnonzero(P[row])
                if nz.size:
                    out[row] = 1 if P[row, nz[0]] < 0 else -1
        return out

    def compare(self, u, v) -> int:
        """Three-way comparison of two exponent vectors: 1 if u > v."""
        return self.sign([int(x) - int(y) for x, y in zip(u, v)])


def compare(u, v, order: TermOrder) -> int:
    return order.compare(u, v)


# --------------------------------------------------------------------------
# the linear system in slack-equality form


@dataclass(frozen=True)
class SlackSystem:
    """``A0 y + z = rhs`` over the free (non-fixed) assets, translated by b.

    Rows are ordered budget, return ceiling, cuts; columns are the free
    structural variables followed by one slack per row.  ``free`` lists the
    original asset index of each structural column and ``translation`` is the
    full length-n lower-bound vector (fixed assets carry their fixed value).
    """

    A0: tuple
    rhs: tuple
    mu_free: tuple
    free: tuple
    translation: tuple
    row_kinds: tuple

    @property
    def m(self) -> int:
        return len(self.A0)

    @property
    def n_free(self) -> int:
        return len(self.free)

    @property
    def N(self) -> int:
        return self.n_free + self.m

    @property
    def A(self) -> list:
        m = self.m
        return [list(row) + [int(i == k) for i in range(m)] for k, row in enumerate(self.A0)]

    @property
    def cost(self) -> tuple:
        return tuple(self.mu_free) + (0,) * self.m

    @property
    def return_slack(self) -> int:
        """Column of the return-ceiling slack (the per-node return gap)."""
        return self.n_free + self.row_kinds.index("return")

    def order(self, tie_break: str = "revlex") -> TermOrder:
        return TermOrder.from_name(self.cost, tie_break)

    def start_point(self):
        """The fiber point with every structural variable at its bound."""
        return tuple([0] * self.n_free) + tuple(self.rhs)

    def extend(self, x) -> tuple:
        """Map a full portfolio x (length n) to the translated extended point."""
        b = self.translation
        y = [int(x[j]) - b[j] for j in self.free]
        z = []
        for row, r in zip(self.A0, self.rhs):
            z.append(r - sum(c * v for c, v in zip(row, y)))
        return tuple(y) + tuple(z)

    def portfolio(self, p) -> tuple:
        """Map an extended point back to a full portfolio."""
        x = list(self.translation)
        for col, j in enumerate(self.free):
            x[j] += int(p[col])
        return tuple(x)

    def retranslate(self, new_b) -> "SlackSystem":
        """Same matrix, new lower bounds: only the right-hand side moves."""
        old = self.translation
        shift = [int(nb) - int(ob) for nb, ob in zip(new_b, old)]
        if any(shift[j] for j in range(len(old)) if j not in self.free):
            raise ValueError("fixed variables cannot be re-translated")
        rhs = tuple(
            r - sum(c * shift[j] for c, j in zip(row, self.free))
            for row, r in zip(self.A0, self.rhs)
        )
        return SlackSystem(self.A0, rhs, self.mu_free, self.free, tuple(int(v) for v in new_b),
                           self.row_kinds)


def build_slack_system(inst, poly, R_ceiling: Optional[int] = None,
                       check_rhs: bool = True) -> SlackSystem:
    """Equality form of the polytope's linear rows after the x = b + y shift.

    ``poly`` is a ``convex.Polytope``; its fixed assets are dropped from the
    column set and their values absorbed into the right-hand side.
    """
    n = inst.n
    b = [int(v) for v in poly.lower]
    fixed = dict(poly.fixed)
    for j, val in fixed.items():
        b[j] = int(val)
    free = tuple(j for j in range(n) if j not in fixed)
    rows = list(poly.rows)
    kinds = list(poly.row_kinds)
    if R_ceiling is not None:
        rows[kinds.index("return")] = (tuple(inst.mu), int(R_ceiling))
    A0, rhs = [], []
    seen = set()
    out_kinds = []
    for (normal, r), kind in zip(rows, kinds):
        key = tuple(int(normal[j]) for j in free)
        if kind == "cut" and (key in seen or not any(key)):
            # repeated or constant over the free assets: carries no information
            continue
        seen.add(key)
        t = int(r) - sum(int(c) * v for c, v in zip(normal, b))
        if check_rhs and t < 0:
            raise NegativeRhs(f"{kind} row has translated rhs {t} < 0")
        A0.append(key)
        rhs.append(t)
        out_kinds.append(kind)
    mu_free = tuple(int(inst.mu[j]) for j in free)
    return SlackSystem(tuple(A0), tuple(rhs), mu_free, free, tuple(b), tuple(out_kinds))


def structured_kernel_basis(A0) -> list:
    """Kernel basis of [A0 | I]: the columns (e_j, -A0 e_j)."""
    m = len(A0)
    n = len(A0[0]) if m else 0
    basis = []
    for j in range(n):
        v = [0] * (n + m)
        v[j] = 1
        for k in range(m):
            v[n + k] = -int(A0[k][j])
        basis.append(v)
    return basis


# --------------------------------------------------------------------------
# test sets


@dataclass
class TestSet:
    vectors: np.ndarray
    order: TermOrder
    stats: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def __len__(self):
        return int(self.vectors.shape[0])

    def __iter__(self):
        return iter(self.as_tuples())

    def as_tuples(self):
        return [tuple(int(x) for x in row) for row in self.vectors]

    @property
    def pos(self):
        return np.maximum(self.vectors, 0)

    @property
    def neg(self):
        return np.maximum(-self.vectors, 0)


def _store_dtype(max_abs):
    return np.int64 if max_abs < _INT_LIMIT else object


class _Completion:
    """Buchberger completion of binomials given as lattice vectors.

    Pair handling follows the Gebauer-Möller installation: new pairs are
    filtered by the lcm criteria, old pairs by the chain criterion, and
    elements whose leading term becomes divisible by a new leading term
    leave the active set.
    """

    def __init__(self, order: TermOrder, nvars: int, max_pairs: int, dtype=np.int64,
                 saturated: bool = False, truncation=None):
        self.order = order
        # optional (T, t): non-negative gradings and the degree bound for each
        self.truncation = None
        if truncation is not None:
            self.truncation = ([[int(c) for c in row] for row in truncation[0]],
                               [int(v) for v in truncation[1]])
        # once the generators span the full (saturated) lattice ideal, pairs
        # whose trailing terms share a variable reduce to zero and are skipped
        self.saturated = saturated
        self.N = nvars
        self.max_pairs = max_pairs
        self.dtype = dtype
        self.cap = 64
        self.V = np.zeros((self.cap, nvars), dtype=dtype)
        self.P = np.zeros((self.cap, nvars), dtype=dtype)
        self.count = 0
        self.alive = np.zeros(self.cap, dtype=bool)
        # pending pairs: i, j, lcm row and a heap of (degree, serial)
        self.pi = []
        self.pj = []
        self.plcm = []
        self.pending = np.zeros(0, dtype=bool)
        self.pair_lcm = np.zeros((0, nvars), dtype=dtype)
        self.pair_i = np.zeros(0, dtype=np.int64)
        self.pair_j = np.zeros(0, dtype=np.int64)
        self.heap = []
        self.pairs_created = 0
        self.pairs_reduced = 0
        self.reductions = 0

    # -- storage -----------------------------------------------------------

    def _grow(self):
        self.cap *= 2
        for name in ("V", "P"):
            old = getattr(self, name)
            new = np.zeros((self.cap, self.N), dtype=self.dtype)
            new[: old.shape[0]] = old
            setattr(self, name, new)
        alive = np.zeros(self.cap, dtype=bool)
        alive[: self.alive.shape[0]] = self.alive
        self.alive = alive

    def _escalate(self):
        log.info("completion: switching to arbitrary-precision integers")
        self.dtype = object
        self.V = self.V.astype(object)
        self.P = self.P.astype(object)
        self.pair_lcm = self.pair_lcm.astype(object)

    def _fits(self, r):
        if self.dtype is object:
            return True
        return int(np.abs(r).max(initial=0)) < _INT_LIMIT

    def orient(self, r):
        s = self.order.sign(r)
        return r if s >= 0 else -r

    # -- reduction -----------------------------------------------------------

    def reduce(self, r):
        """Reduce the leading term of r against the active set until stuck."""
        r = self.orient(r)
        while True:
            if not r.any():
                return None
            rp = np.maximum(r, 0)
            k = self.count
            hits = np.flatnonzero(self.alive[:k] & np.all(self.P[:k] <= rp, axis=1))
            if hits.size == 0:
                return r
            r = r - self.V[hits[0]]
            self.reductions += 1
            if not self._fits(r):
                self._escalate()
                r = r.astype(object)
            r = self.orient(r)

    # -- pair management -----------------------------------------------------

    def add(self, h):
        if self.count == self.cap:
            self._grow()
        ih = self.count
        hp = np.maximum(h, 0)
        self._hneg = np.maximum(-h, 0)
        self.V[ih] = h
        self.P[ih] = hp
        self.count += 1

        G = np.flatnonzero(self.alive[:ih])
        new_pairs = self._new_pairs(G, hp)

        # criterion B on pending pairs
        if self.pending.any():
            idx = np.flatnonzero(self.pending)
            L = self.pair_lcm[idx]
            divides = np.all(hp <= L, axis=1)
            if divides.any():
                i_lead = self.P[self.pair_i[idx]]
                j_lead = self.P[self.pair_j[idx]]
                li = np.maximum(i_lead, hp)
                lj = np.maximum(j_lead, hp)
                eq_i = np.all(li == L, axis=1)
                eq_j = np.all(lj == L, axis=1)
                drop = divides & ~eq_i & ~eq_j
                self.pending[idx[drop]] = False

        # deactivate elements whose lead is divisible by the new lead
        if G.size:
            div = np.all(self.P[G] >= hp, axis=1)
            self.alive[G[div]] = False
        self.alive[ih] = True

        if new_pairs:
            start = self.pair_i.size
            k = len(new_pairs)
            self.pairs_created += k
            if self.pairs_created > self.max_pairs:
                raise ResourceExhausted(
                    f"pair queue ceiling {self.max_pairs} exceeded",
                    self.stats(),
                )
            self.pair_i = np.concatenate([self.pair_i, np.array([g for g, _ in new_pairs], dtype=np.int64)])
            self.pair_j = np.concatenate([self.pair_j, np.full(k, ih, dtype=np.int64)])
            self.pair_lcm = np.concatenate([self.pair_lcm, np.array([L for _, L in new_pairs], dtype=self.dtype).reshape(k, self.N)])
            self.pending = np.concatenate([self.pending, np.ones(k, dtype=bool)])
            for off, (_, L) in enumerate(new_pairs):
                heapq.heappush(self.heap, (int(L.sum()), start + off))

    def _new_pairs(self, G, hp):
        if G.size == 0:
            return []
        lead = self.P[G]
        keep = np.any((lead > 0) & (hp > 0), axis=1)
        if self.saturated:
            trail = self.V[G] < 0
            keep &= ~np.any(trail & (self._hneg > 0), axis=1)
        G = G[keep]
        lcm = np.maximum(self.P[G], hp)
        if self.truncation is not None:
            ok = [not self._too_high(L) for L in lcm]
            G, lcm = G[ok], lcm[ok]
        return list(zip(G, lcm))

    def _too_high(self, v):
        T, t = self.truncation
        vp = [max(int(x), 0) for x in v]
        return any(sum(c * x for c, x in zip(row, vp)) > bound for row, bound in zip(T, t))

    def stats(self):
        return {
            "elements": int(self.alive[: self.count].sum()),
            "generated": int(self.count),
            "pairs_created": int(self.pairs_created),
            "pairs_reduced": int(self.pairs_reduced),
            "reductions": int(self.reductions),
            "pending": int(self.pending.sum()),
        }

    def run(self, generators):
        for g in generators:
            g = np.array(g, dtype=self.dtype)
            if self.truncation is not None and self._too_high(self.orient(g)):
                continue
            r = self.reduce(g)
            if r is not None:
                self.add(r)
        while self.heap:
            _, p = heapq.heappop(self.heap)
            if not self.pending[p]:
                continue
            self.pending[p] = False
            i, j = self.pair_i[p], self.pair_j[p]
            self.pairs_reduced += 1
            s = self.V[j] - self.V[i]
            r = self.reduce(s)
            if r is not None:
                self.add(r)
            if len(self.heap) > 4 * max(1, int(self.pending.sum())) + 1024:
                self._compact()
        return self.basis()

    def _compact(self):
        idx = np.flatnonzero(self.pending)
        self.pair_i = self.pair_i[idx]
        self.pair_j = self.pair_j[idx]
        self.pair_lcm = self.pair_lcm[idx]
        self.pending = np.ones(idx.size, dtype=bool)
        self.heap = [(int(self.pair_lcm[t].sum()), t) for t in range(idx.size)]
        heapq.heapify(self.heap)

    def basis(self):
        return self.V[np.flatnonzero(self.alive[: self.count])].copy()


def _interreduce(V: np.ndarray, order: TermOrder) -> np.ndarray:
    """Reduce trailing terms so the basis becomes the unique reduced one."""
    V = V.copy()
    P = np.maximum(V, 0)
    k = V.shape[0]
    changed = True
    while changed:
        changed = False
        for i in range(k):
            while True:
                neg = np.maximum(-V[i], 0)
                hits = np.flatnonzero(np.all(P <= neg, axis=1))
                hits = hits[hits != i]
                if hits.size == 0:
                    break
                h = hits[0]
                # add h as many times as its lead still divides the trail
                hp = P[h]
                sup = hp > 0
                t = int(min(int(a) // int(b) for a, b in zip(neg[sup], hp[sup])))
                t = max(t, 1)
                V[i] = V[i] + t * V[h]
                if order.sign(V[i]) <= 0:  # pragma: no cover - would break minimality
                    raise ArithmeticError("interreduction changed a leading term")
                P[i] = np.maximum(V[i], 0)
                changed = True
    return V


def _canonical_sort(V: np.ndarray) -> np.ndarray:
    if V.shape[0] == 0:
        return V
    rows = sorted((tuple(int(x) for x in r) for r in V))
    return np.array(rows, dtype=V.dtype)


def truncation_gradings(sys: SlackSystem, rhs=None):
    """Rows of ``[A0 | I]`` usable for truncation, with their degree bounds.

    Only rows with non-negative coefficients grade the lattice ideal
    compatibly with divisibility.  ``rhs`` defaults to the system's own
    right-hand side.
    """
    rhs = sys.rhs if rhs is None else rhs
    T, t = [], []
    for k, row in enumerate(sys.A0):
        if all(c >= 0 for c in row):
            T.append([int(c) for c in row] + [int(i == k) for i in range(sys.m)])
            t.append(int(rhs[k]))
    return T, t


def groebner_test_set(sys: SlackSystem, max_pairs: int = DEFAULT_MAX_PAIRS,
                      truncate: bool = False, tie_break: str = "revlex") -> TestSet:
    """Reduced Gröbner basis of the lattice ideal of ker_Z([A0 | I]).

    The generators ``x_j * z^(A0_j)^- - z^(A0_j)^+`` span the lattice ideal
    after saturating by the slacks of rows that carry a negative
    coefficient; each such saturation is a completion under revlex with that
    slack last.  The final completion uses the cost order with the named
    tie-break (see ``TermOrder.from_name``).

    With ``truncate`` only the elements whose degree in every non-negative
    row stays within the system's right-hand side are computed (pairs above
    it are never formed).  The result is then a test set for every fiber
    whose right-hand side is componentwise at most ``sys.rhs`` on those rows,
    which covers all re-translations to larger lower bounds.
    """
    n, m = sys.n_free, sys.m
    N = n + m
    order = sys.order(tie_break)
    if n == 0:
        return TestSet(np.zeros((0, N), dtype=np.int64), order, {"elements": 0})
    _check_rank(sys)
    gens = structured_kernel_basis(sys.A0)
    max_abs = max((abs(v) for g in gens for v in g), default=0)
    dtype = _store_dtype(max_abs)
    stats = {}
    negative_rows = [k for k in range(m) if any(c < 0 for c in sys.A0[k])]
    for k in negative_rows:
        gens, dtype, st = _run_completion(gens, TermOrder.revlex_last(N, n + k), N, max_pairs,
                                          dtype, saturated=False)
        stats[f"saturate_z{k}"] = st
    truncation = truncation_gradings(sys) if truncate else None
    V, dtype, st = _run_completion(gens, order, N, max_pairs, dtype, saturated=True,
                                   truncation=truncation)
    stats.update(st)
    V = _interreduce(V, order)
    V = _canonical_sort(V)
    stats["elements"] = int(V.shape[0])
    stats["truncated"] = bool(truncate)
    return TestSet(V, order, stats)


def _run_completion(gens, order, N, max_pairs, dtype, saturated, truncation=None):
    """Compiled int64 completion with an arbitrary-precision fallback."""
    if dtype is not object:
        from . import _completion_nb

        V, st, status = _completion_nb.complete(np.asarray(gens, dtype=np.int64).reshape(-1, N),
                                                order, saturated, max_pairs, truncation)
        if status == _completion_nb.STATUS_OK:
            return V, np.int64, st
        if status == _completion_nb.STATUS_PAIR_LIMIT:
            raise ResourceExhausted(f"pair queue ceiling {max_pairs} exceeded", st)
        log.info("completion overflowed int64; retrying with Python integers")
        dtype = object
    comp = _Completion(order, N, max_pairs, dtype, saturated=saturated, truncation=truncation)
    V = comp.run(gens)
    return V, comp.dtype, comp.stats()


def _check_rank(sys):
    # [A0 | I] always has full row rank, so repeated rows are harmless to the
    # algebra; a repeated cut row is still rejected because it means the cut
    # generator produced nothing new (build_slack_system drops those).  The
    # budget and return rows may coincide once assets are fixed.
    seen = set()
    for row, kind in zip(sys.A0, sys.row_kinds):
        key = tuple(row)
        if kind == "cut" and key in seen and sys.n_free > 0:
            raise RankDeficient("duplicate cut rows in the linear system")
        seen.add(key)


# --------------------------------------------------------------------------
# reduction


def reduce_point(p: Sequence[int], ts: TestSet, rng=None) -> tuple:
    """Normal form of a fiber point: the optimum of its linear integer program.

    Repeatedly subtracts a test vector whose positive part fits under the
    point, as many times as it keeps fitting.  ``rng`` picks the reducer at
    random instead of the first one (the normal form does not depend on it).
    """
    if len(ts) == 0:
        return tuple(int(x) for x in p)
    dtype = ts.vectors.dtype
    big = max(int(x) for x in p) >= _INT_LIMIT if len(p) else False
    if big and dtype != object:
        dtype = object
    V = ts.vectors.astype(dtype, copy=False)
    P = np.maximum(V, 0)
    y = np.array([int(x) for x in p], dtype=dtype)
    if np.any(y < 0):
        raise ValueError("reduce_point needs a non-negative point")
    while True:
        hits = np.flatnonzero(np.all(P <= y, axis=1))
        if hits.size == 0:
            return tuple(int(x) for x in y)
        h = hits[0] if rng is None else hits[rng.integers(hits.size)]
        v = V[h]
        sup = P[h] > 0
        t = int(min(int(a) // int(b) for a, b in zip(y[sup], P[h][sup])))
        if rng is not None:
            t = int(rng.integers(1, t + 1))
        y = y - t * v


def is_reducible(p, ts: TestSet) -> bool:
    return bool(np.any(np.all(ts.pos <= np.asarray(p), axis=1)))


# --------------------------------------------------------------------------
# plain-text import/export (one vector per line, 4ti2-style header optional)


def write_test_set(path, ts: TestSet, header: bool = True):
    with open(path, "w") as fh:
        if header:
            fh.write(f"{len(ts)} {ts.vectors.shape[1]}\n")
        for row in ts.as_tuples():
            fh.write(" ".join(str(x) for x in row) + "\n")


def read_vectors(path) -> list:
    rows = []
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if lines and len(lines[0]) == 2 and len(lines) > 1 and len(lines[1]) != 2:
        lines = lines[1:]
    elif lines and len(lines[0]) == 2 and len(lines) == int(lines[0][0]) + 1:
        lines = lines[1:]
    for parts in lines:
        rows.append(tuple(int(x) for x in parts))
    return rows


def read_test_set(path, order: TermOrder) -> TestSet:
    rows = read_vectors(path)
    dtype = _store_dtype(max((abs(x) for r in rows for x in r), default=0))
    V = np.array(rows, dtype=dtype).reshape(len(rows), order.nvars)
    return TestSet(V, order, {"elements": len(rows)})
