"""Exact point counting.

All counts are arbitrary-precision integers; no floating point enters
until rank extraction. The primary engine for |S_F| is the rank trick:
summing Q^(n - rank(slice_matrix)) over (d-2)-tuples instead of scanning
all (d-1)-tuples. Since the slice rank is invariant under scaling each
slot vector, the enumeration runs over projective representatives and is
multiplied back by (Q-1)^(d-2); tuples containing a zero vector
contribute a closed form. A literal full-enumeration counter is retained
solely as a differential-testing oracle.

Enumeration spaces are split into contiguous index chunks merged by exact
integer addition, so results are identical for any worker count
(MULTIRANK_THREADS). Budget gates raise BudgetError naming the offending
exponent; nothing is silently truncated.
"""

from __future__ import annotations

import functools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import BudgetError
from .field import FieldSpec, embed, kernel, make_field
from .tensor import HomogeneousForm, IntMultilinearForm, MultilinearForm, base_change, poly_base_change

DEFAULT_BUDGET_BITS = 28
BOX_BUDGET_BITS = 34

_NUMPY_SAFE = 1 << 62


def worker_threads() -> int:
    raw = os.environ.get("MULTIRANK_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _chunked_sum(total: int, fn: Callable[[int, int], int], min_chunk: int = 4096) -> int:
    """Sum fn(start, stop) over contiguous chunks covering range(total)."""
    t = worker_threads()
    if t <= 1 or total < 2 * min_chunk:
        return fn(0, total)
    nchunks = min(t * 4, max(1, total // min_chunk))
    step = -(-total // nchunks)
    spans = [(s, min(s + step, total)) for s in range(0, total, step)]
    with ThreadPoolExecutor(max_workers=t) as ex:
        partials = list(ex.map(lambda se: fn(*se), spans))
    return sum(partials)


# ---------------------------------------------------------------------------
# linear algebra over F_q on element indices
# ---------------------------------------------------------------------------

def matrix_rank(rows: list[list[int]], ncols: int, K) -> int:
    """Gaussian elimination with first-nonzero pivoting; rows are mutated."""
    n = ncols
    if len(rows) == 1:
        return 1 if any(rows[0]) else 0
    if n == 2 and len(rows) == 2:
        a, b = rows[0]
        c, d = rows[1]
        if K.sub(K.mul(a, d), K.mul(b, c)):
            return 2
        return 1 if (a or b or c or d) else 0
    mul, sub, inv = K.mul, K.sub, K.inv
    rank = 0
    m = len(rows)
    for col in range(n):
        piv = None
        for r in range(rank, m):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        pinv = inv(prow[col])
        for r in range(rank + 1, m):
            v = rows[r][col]
            if v:
                f = mul(v, pinv)
                rr = rows[r]
                for c2 in range(col + 1, n):
                    if prow[c2]:
                        rr[c2] = sub(rr[c2], mul(f, prow[c2]))
                rr[col] = 0
        rank += 1
        if rank == m:
            break
    return rank


def _rank3_flat(m: Sequence[int], K) -> int:
    """Rank of a 3x3 matrix given as a flat 9-tuple, determinant first."""
    a, b, c, d, e, f, g, h, i = m
    mul, sub, add = K.mul, K.sub, K.add
    t1 = sub(mul(e, i), mul(f, h))
    t2 = sub(mul(d, i), mul(f, g))
    t3 = sub(mul(d, h), mul(e, g))
    det = sub(add(mul(a, t1), mul(c, t3)), mul(b, t2))
    if det:
        return 3
    if t1 or t2 or t3:
        return 2
    if (sub(mul(a, e), mul(b, d)) or sub(mul(a, f), mul(c, d)) or
            sub(mul(b, f), mul(c, e)) or sub(mul(a, h), mul(b, g)) or
            sub(mul(a, i), mul(c, g)) or sub(mul(b, i), mul(c, h))):
        return 2
    return 1 if any(m) else 0


def nullspace_basis(rows: list[list[int]], ncols: int, K) -> list[list[int]]:
    """Basis of the right kernel; rows are reduced in place."""
    m = len(rows)
    piv_cols: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, m):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pinv = K.inv(rows[rank][col])
        if pinv != 1:
            rows[rank] = [K.mul(pinv, v) for v in rows[rank]]
        prow = rows[rank]
        for r in range(m):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [K.sub(x, K.mul(f, pc)) for x, pc in zip(rows[r], prow)]
        piv_cols.append(col)
        rank += 1
        if rank == m:
            break
    pivset = set(piv_cols)
    basis = []
    for fc in range(ncols):
        if fc in pivset:
            continue
        vec = [0] * ncols
        vec[fc] = 1
        for r, pc in enumerate(piv_cols):
            v = rows[r][fc]
            if v:
                vec[pc] = K.neg(v)
        basis.append(vec)
    return basis


def span_vectors(basis: list[list[int]], K, ncols: int) -> list[tuple[int, ...]]:
    """All q^k vectors spanned by the basis, deterministic order."""
    vecs: list[tuple[int, ...]] = [tuple([0] * ncols)]
    add, mul = K.add, K.mul
    for b in basis:
        new = []
        for c in range(K.q):
            cb = b if c == 1 else [mul(c, x) for x in b]
            for v in vecs:
                new.append(tuple(add(x, y) for x, y in zip(v, cb)))
        vecs = new
    return vecs


# ---------------------------------------------------------------------------
# level handling and projective enumeration
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _level_embedding(field: FieldSpec, l: int):
    target = make_field(field.p, field.e * l)
    return embed(field, target)


def level_form(F: MultilinearForm, l: int) -> MultilinearForm:
    """F base-changed to the canonical degree-l extension of its field."""
    if l < 1:
        raise ValueError("level must be >= 1")
    if l == 1:
        return F
    return base_change(F, _level_embedding(F.field, l))


def level_poly(f: HomogeneousForm, l: int) -> HomogeneousForm:
    if l == 1:
        return f
    return poly_base_change(f, _level_embedding(f.field, l))


def projective_points(q: int, n: int) -> list[tuple[int, ...]]:
    """Representatives with first nonzero coordinate 1, ascending order."""
    pts = []
    for pivot in range(n):
        free = n - pivot - 1
        head = (0,) * pivot + (1,)
        for tail in range(q ** free):
            vec = list(head)
            t = tail
            for _ in range(free):
                t, r = divmod(t, q)
                vec.append(r)
            pts.append(tuple(vec))
    return pts


# ---------------------------------------------------------------------------
# |S_F| counting
# ---------------------------------------------------------------------------

def count_SF(F: MultilinearForm, l: int = 1,
             budget_bits: float = DEFAULT_BUDGET_BITS) -> int:
    """Exact |S_{F_l}(F_{q^l})| via the rank trick.

    Equals sum over x in V^(d-2) of Q^(n - rank(slice_matrix(F_l, x))),
    which in turn equals the literal count of (d-1)-tuples killing the
    last slot.
    """
    Fl = level_form(F, l)
    K = kernel(Fl.field)
    Q, n, d = K.q, F.n, F.d

    if d == 2:
        rows = [list(Fl.coeffs[i * n:(i + 1) * n]) for i in range(n)]
        return Q ** (n - matrix_rank(rows, n, K))

    bits = (d - 2) * n * math.log2(Q)
    if bits > budget_bits:
        raise BudgetError("S_F slice enumeration q^(l*n*(d-2))", bits, budget_bits,
                          hint="use a smaller l or raise the budget")

    pts = projective_points(Q, n)
    P = len(pts)
    zero_tuples = Q ** (n * (d - 2)) - (Q ** n - 1) ** (d - 2)
    total = zero_tuples * Q ** n

    if d == 3:
        blocks = [Fl.coeffs[i * n * n:(i + 1) * n * n] for i in range(n)]
        nn = n * n
        add, mul = K.add, K.mul

        def chunk(start: int, stop: int) -> int:
            acc = 0
            for pi in range(start, stop):
                v = pts[pi]
                M = None
                for j in range(n):
                    x = v[j]
                    if not x:
                        continue
                    bj = blocks[j]
                    if M is None:
                        M = list(bj) if x == 1 else [mul(x, c) for c in bj]
                    elif x == 1:
                        for k in range(nn):
                            if bj[k]:
                                M[k] = add(M[k], bj[k])
                    else:
                        for k in range(nn):
                            if bj[k]:
                                M[k] = add(M[k], mul(x, bj[k]))
                if n == 2:
                    det = K.sub(mul(M[0], M[3]), mul(M[1], M[2]))
                    r = 2 if det else (1 if (M[0] or M[1] or M[2] or M[3]) else 0)
                elif n == 3:
                    r = _rank3_flat(M, K)
                else:
                    r = matrix_rank([M[i * n:(i + 1) * n] for i in range(n)], n, K)
                acc += Q ** (n - r)
            return acc

        proj_sum = _chunked_sum(P, chunk)
    else:
        def chunk(start: int, stop: int) -> int:
            acc = 0
            for flat in range(start, stop):
                t = flat
                vecs = []
                for _ in range(d - 2):
                    t, r = divmod(t, P)
                    vecs.append(pts[r])
                M = Fl._contract_prefix(vecs)
                acc += Q ** (n - matrix_rank([M[i * n:(i + 1) * n] for i in range(n)], n, K))
            return acc

        proj_sum = _chunked_sum(P ** (d - 2), chunk)

    return total + (Q - 1) ** (d - 2) * proj_sum


def count_SF_naive(F: MultilinearForm, l: int = 1,
                   budget_bits: float = DEFAULT_BUDGET_BITS) -> int:
    """Differential-testing oracle: literal enumeration of all (d-1)-tuples."""
    Fl = level_form(F, l)
    K = kernel(Fl.field)
    Q, n, d = K.q, F.n, F.d
    bits = (d - 1) * n * math.log2(Q)
    if bits > budget_bits:
        raise BudgetError("naive S_F enumeration q^(l*n*(d-1))", bits, budget_bits)

    coeffs = Fl.coeffs
    space = Q ** n

    def chunk(start: int, stop: int) -> int:
        acc = 0
        for flat in range(start, stop):
            t = flat
            vecs = []
            for _ in range(d - 1):
                t, vi = divmod(t, space)
                vec = []
                for _ in range(n):
                    vi, r = divmod(vi, Q)
                    vec.append(r)
                vecs.append(vec)
            cur: Sequence[int] = coeffs
            slots = d
            for v in vecs:
                cur = Fl._contract_first(cur, slots, v)
                slots -= 1
            if not any(cur):
                acc += 1
        return acc

    return _chunked_sum(space ** (d - 1), chunk)


def sf_profile(F: MultilinearForm, l_max: int,
               budget_bits: float = DEFAULT_BUDGET_BITS) -> "CountProfile":
    entries = tuple((l, count_SF(F, l, budget_bits)) for l in range(1, l_max + 1))
    return CountProfile(F.field.q, F.n * (F.d - 1), entries)


@dataclass(frozen=True)
class CountProfile:
    """Exact counts per extension level, with the ambient exponent."""

    base: int
    ambient_exp: int
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for l, c in self.entries:
            if not (1 <= c <= self.base ** (l * self.ambient_exp)):
                raise ValueError(f"count at level {l} outside [1, ambient]")

    def dims(self) -> list[float]:
        """log_{q^l} count for each level."""
        return [math.log(c) / (l * math.log(self.base)) for l, c in self.entries]


# ---------------------------------------------------------------------------
# singular locus of a polynomial
# ---------------------------------------------------------------------------

def count_singular(f: HomogeneousForm, l: int = 1,
                   budget_bits: float = DEFAULT_BUDGET_BITS) -> int:
    """Exact count of points where all n formal partial derivatives vanish."""
    if f.field is None:
        raise ValueError("count_singular needs a finite-field polynomial")
    fl = level_poly(f, l)
    K = kernel(fl.field)
    Q, n = K.q, f.n
    bits = n * math.log2(Q)
    if bits > budget_bits:
        raise BudgetError("singular locus enumeration q^(l*n)", bits, budget_bits)
    partials = [list(fl.partial(j).terms) for j in range(n)]
    mul, add, pw = K.mul, K.add, K.pow

    def chunk(start: int, stop: int) -> int:
        acc = 0
        for flat in range(start, stop):
            t = flat
            point = []
            for _ in range(n):
                t, r = divmod(t, Q)
                point.append(r)
            ok = True
            for terms in partials:
                val = 0
                for exp, c in terms:
                    v = c
                    for x, e in zip(point, exp):
                        if e:
                            if not x:
                                v = 0
                                break
                            v = mul(v, pw(x, e))
                    val = add(val, v)
                if val:
                    ok = False
                    break
            if ok:
                acc += 1
        return acc

    return _chunked_sum(Q ** n, chunk)


# ---------------------------------------------------------------------------
# polynomial-ring solution counts N_R
# ---------------------------------------------------------------------------

def _poly_mul_trunc(a: Sequence[int], b: Sequence[int], K, trunc: int | None = None) -> tuple[int, ...]:
    """Convolution of coefficient tuples over the field, optionally mod t^trunc."""
    if not a or not b:
        return ()
    la, lb = len(a), len(b)
    size = la + lb - 1 if trunc is None else min(la + lb - 1, trunc)
    out = [0] * size
    add, mul = K.add, K.mul
    for i, ai in enumerate(a):
        if ai:
            jmax = size - i
            for j, bj in enumerate(b[:jmax]):
                if bj:
                    out[i + j] = add(out[i + j], mul(ai, bj))
    return tuple(out)


def _poly_add(a: Sequence[int], b: Sequence[int], K) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        if x:
            out[i] = K.add(out[i], x)
    return tuple(out)


def _decode_block(flat: int, n: int, deg: int, Q: int) -> list[tuple[int, ...]]:
    """One vector of n polynomials with deg coefficients each."""
    polys = []
    for _ in range(n):
        coeffs = []
        for _ in range(deg):
            flat, r = divmod(flat, Q)
            coeffs.append(r)
        polys.append(tuple(coeffs))
    return polys


def _contract_poly_first(flat: Sequence[Sequence[int]], slots: int, n: int,
                         vec: Sequence[Sequence[int]], K, trunc: int | None) -> list[tuple[int, ...]]:
    block = n ** (slots - 1)
    out: list[tuple[int, ...]] = [()] * block
    for i, x in enumerate(vec):
        if any(x):
            base = i * block
            for j in range(block):
                c = flat[base + j]
                if c:
                    out[j] = _poly_add(out[j], _poly_mul_trunc(x, c, K, trunc), K)
    return out


def _last_block_system(M: Sequence[Sequence[int]], n: int, R: int, nrows_deg: int,
                       trunc: int | None) -> list[list[int]]:
    """Linear system over F_q for the last block.

    M[j*n + i] is the polynomial F(prefix, e_j, e_i); unknowns are the
    coefficients y_{j,s} (s < R) of the last block; equations are the
    t-coefficients (degree < nrows_deg) of sum_j y_j * M[j][i], truncated
    when trunc is given.
    """
    rows = []
    for i in range(n):
        for ell in range(nrows_deg):
            row = []
            for j in range(n):
                poly = M[j * n + i]
                for s in range(R):
                    k = ell - s
                    row.append(poly[k] if 0 <= k < len(poly) else 0)
            rows.append(row)
    return rows


def count_NR(F: MultilinearForm, R: int,
             budget_bits: float = DEFAULT_BUDGET_BITS) -> int:
    """Solutions x in (F_q[t]^n)^(d-1), entry degrees < R, with F(x, e_i) = 0 for all i.

    Enumerates the first d-2 blocks and solves the exact linear system for
    the last block; each prefix contributes q^(nR - rank).
    """
    if R < 1:
        raise ValueError("degree bound R must be >= 1")
    K = kernel(F.field)
    q, n, d = K.q, F.n, F.d
    full_bits = n * (d - 1) * R * math.log2(q)
    if full_bits > BOX_BUDGET_BITS:
        raise BudgetError("polynomial-ring space q^(n(d-1)R)", full_bits, BOX_BUDGET_BITS)
    prefix_bits = n * R * (d - 2) * math.log2(q)
    if prefix_bits > budget_bits:
        raise BudgetError("polynomial-ring prefix enumeration", prefix_bits, budget_bits)

    deg_out = (d - 1) * (R - 1) + 1
    block_space = q ** (n * R)
    unknowns = n * R

    def chunk(start: int, stop: int) -> int:
        acc = 0
        for flat in range(start, stop):
            t = flat
            vecs = []
            for _ in range(d - 2):
                t, b = divmod(t, block_space)
                vecs.append(_decode_block(b, n, R, q))
            cur: Sequence[Sequence[int]] = [(c,) if c else () for c in F.coeffs]
            slots = d
            for v in vecs:
                cur = _contract_poly_first(cur, slots, n, v, K, None)
                slots -= 1
            rows = _last_block_system(cur, n, R, deg_out, None)
            r = matrix_rank(rows, unknowns, K)
            acc += q ** (unknowns - r)
        return acc

    return _chunked_sum(block_space ** (d - 2), chunk)


# ---------------------------------------------------------------------------
# truncated-ring fiber counts N^y
# ---------------------------------------------------------------------------

def zero_fiber_target(F: MultilinearForm, b: int) -> tuple:
    """The all-zero reduction target in ((F_q[t]/t^b)^n)^(d-1)."""
    return tuple(tuple((0,) * b for _ in range(F.n)) for _ in range(F.d - 1))


def count_fiber(F: MultilinearForm, a: int, b: int, y: Sequence,
                budget_bits: float = DEFAULT_BUDGET_BITS) -> int:
    """N^y: solutions of G(x) = 0 in (F_q[t]/t^a)^n restricted to x = y mod t^b.

    G(x)_i = F(x, e_i) computed mod t^a; y is a (d-1)-tuple of vectors of
    length-b coefficient tuples.
    """
    if not (0 <= b <= a):
        raise ValueError("need 0 <= b <= a")
    K = kernel(F.field)
    q, n, d = K.q, F.n, F.d
    bits = n * (d - 1) * a * math.log2(q)
    if bits > budget_bits:
        raise BudgetError("fiber space q^(n(d-1)a)", bits, budget_bits)
    y = tuple(tuple(tuple(c) for c in vec) for vec in y)
    if len(y) != d - 1 or any(len(vec) != n for vec in y):
        raise ValueError("fiber target has wrong shape")
    if any(len(c) != b for vec in y for c in vec):
        raise ValueError(f"fiber target coefficients must have length b = {b}")

    free = a - b
    block_space = q ** (n * free)
    total = 0
    coeffs0: list[Sequence[int]] = [(c,) if c else () for c in F.coeffs]
    for flat in range(block_space ** (d - 1)):
        t = flat
        vecs = []
        for kblk in range(d - 1):
            t, bk = divmod(t, block_space)
            z = _decode_block(bk, n, free, q)
            vec = tuple(y[kblk][j] + z[j] for j in range(n))
            vecs.append(vec)
        cur: Sequence[Sequence[int]] = coeffs0
        slots = d
        for v in vecs:
            cur = _contract_poly_first(cur, slots, n, v, K, a)
            slots -= 1
        if not any(any(p) for p in cur):
            total += 1
    return total


def fiber_counts(F: MultilinearForm, a: int, b: int,
                 budget_bits: float = DEFAULT_BUDGET_BITS) -> dict[tuple, int]:
    """Histogram {y: N^y} over all reduction targets at once.

    Enumerates the first d-2 blocks fully and walks the kernel of the
    last-block linear system, so the work is proportional to the number
    of solutions rather than the whole space. Values agree with
    count_fiber entry by entry.
    """
    if not (0 <= b <= a):
        raise ValueError("need 0 <= b <= a")
    K = kernel(F.field)
    q, n, d = K.q, F.n, F.d
    bits = n * (d - 1) * a * math.log2(q)
    if bits > budget_bits:
        raise BudgetError("fiber space q^(n(d-1)a)", bits, budget_bits)

    block_space = q ** (n * a)
    hist: dict[tuple, int] = {}
    coeffs0: list[Sequence[int]] = [(c,) if c else () for c in F.coeffs]

    def reduce_key(polys: Sequence[Sequence[int]]) -> tuple:
        return tuple(tuple(p[s] if s < len(p) else 0 for s in range(b)) for p in polys)

    for flat in range(block_space ** (d - 2)):
        t = flat
        prefix = []
        for _ in range(d - 2):
            t, bk = divmod(t, block_space)
            prefix.append(_decode_block(bk, n, a, q))
        cur: Sequence[Sequence[int]] = coeffs0
        slots = d
        for v in prefix:
            cur = _contract_poly_first(cur, slots, n, v, K, a)
            slots -= 1
        rows = _last_block_system(cur, n, a, a, a)
        basis = nullspace_basis(rows, n * a, K)
        prefix_key = tuple(reduce_key(v) for v in prefix)
        for vec in span_vectors(basis, K, n * a):
            polys = [vec[j * a:(j + 1) * a] for j in range(n)]
            key = prefix_key + (reduce_key(polys),)
            hist[key] = hist.get(key, 0) + 1
    return hist


# ---------------------------------------------------------------------------
# integer box counts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoxSpec:
    """Height box for integer solutions.

    signed True counts entries in (-bound, bound), False in [0, bound);
    modulus L switches the vanishing test to congruence mod L.
    """

    bound: int
    signed: bool = True
    modulus: int | None = None

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("height bound must be >= 1")
        if self.modulus is not None and self.modulus < 2:
            raise ValueError("modulus must be >= 2")

    @property
    def width(self) -> int:
        return 2 * self.bound - 1 if self.signed else self.bound

    def coords(self) -> list[int]:
        if self.signed:
            return list(range(-self.bound + 1, self.bound))
        return list(range(self.bound))


def _box_gate(G: IntMultilinearForm, box: BoxSpec, budget_bits: float) -> None:
    bits = G.n * (G.d - 1) * math.log2(max(box.width, 2))
    if bits > budget_bits:
        raise BudgetError("box enumeration width^(n(d-1))", bits, budget_bits)


def _box_eval_ok(vals: Sequence[int], L: int | None) -> bool:
    if L is None:
        return not any(vals)
    return all(v % L == 0 for v in vals)


def _box_pure(G: IntMultilinearForm, box: BoxSpec, collect: bool):
    coords = box.coords()
    w = len(coords)
    n, d = G.n, G.d
    ncoords = n * (d - 1)
    total = w ** ncoords
    L = box.modulus
    sols: list[tuple[int, ...]] = []
    count = 0
    for flat in range(total):
        t = flat
        pos = [0] * ncoords
        for k in range(ncoords - 1, -1, -1):
            t, r = divmod(t, w)
            pos[k] = coords[r]
        vecs = [pos[k * n:(k + 1) * n] for k in range(d - 1)]
        vals = G.contract_last(vecs)
        if _box_eval_ok(vals, L):
            count += 1
            if collect:
                sols.append(tuple(pos))
    return count, sols


def _box_numpy(G: IntMultilinearForm, box: BoxSpec, collect: bool):
    import itertools

    import numpy as np

    coords = box.coords()
    n = G.n
    L = box.modulus
    C = np.array(G.coeffs, dtype=np.int64).reshape((n, n, n))
    pts = list(itertools.product(coords, repeat=n))
    X = np.array(pts, dtype=np.int64)  # (P, n), row-major over coords
    P = X.shape[0]
    count = 0
    sols: list[tuple[int, ...]] = []
    for i1 in range(P):
        M = np.tensordot(C, X[i1], axes=([0], [0]))  # M[j2, i]
        vals = X @ M  # (P, n)
        if L is None:
            mask = ~vals.any(axis=1)
        else:
            mask = ~(vals % L).any(axis=1)
        c = int(np.count_nonzero(mask))
        if c:
            count += c
            if collect:
                x1 = tuple(int(v) for v in X[i1])
                for i2 in np.nonzero(mask)[0]:
                    sols.append(x1 + tuple(int(v) for v in X[i2]))
    return count, sols


def _box_dispatch(G: IntMultilinearForm, box: BoxSpec, collect: bool,
                  budget_bits: float):
    _box_gate(G, box, budget_bits)
    use_numpy = (
        G.d == 3
        and box.width ** (G.n * 2) > 1 << 14
        and G.max_abs_coeff() * (G.n ** (G.d - 1)) * max(box.bound, 1) ** (G.d - 1) < _NUMPY_SAFE
    )
    if use_numpy:
        return _box_numpy(G, box, collect)
    return _box_pure(G, box, collect)


def count_box(G: IntMultilinearForm, box: BoxSpec,
              budget_bits: float = BOX_BUDGET_BITS) -> int:
    """Exact count of x in the box with G(x, e_i) = 0 for all i (mod L if set)."""
    return _box_dispatch(G, box, collect=False, budget_bits=budget_bits)[0]


def box_solutions(G: IntMultilinearForm, box: BoxSpec,
                  budget_bits: float = BOX_BUDGET_BITS) -> list[tuple[int, ...]]:
    """The solutions themselves, as flat coordinate tuples in enumeration order."""
    return _box_dispatch(G, box, collect=True, budget_bits=budget_bits)[1]
