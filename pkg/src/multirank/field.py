"""Exact arithmetic in F_{p^e}.

Fields are described by a FieldSpec: characteristic p, extension degree e,
and a monic irreducible modulus of degree e over F_p (coefficient list,
constant term first). make_field(p, e) always picks the canonical modulus,
the lexicographically least monic irreducible, so specs are reproducible
byte for byte across runs and platforms. Elements are digit vectors of
length e with digits in [0, p).

Internally every element also has an index, the integer sum(digit[i]*p^i);
enumeration order is ascending index (zero first). Hot loops in the
counting kernels work on indices through the cached arithmetic kernel;
that is an internal representation choice, the public contract stays digit
vectors.

Embeddings between F_{p^e} and F_{p^{e*l}} are found by exhaustive root
search of the source modulus in the target, taking the least root, and are
checked on construction. No compatible tower of embeddings is attempted:
every base change goes through an explicitly constructed FieldEmbedding.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetError
from .rng import SplitMix64

MAX_FIELD_SIZE = 1 << 20

# thresholds for precomputed tables; above them ops fall back to direct
# polynomial arithmetic (correct, slower)
_MUL_TABLE_LIMIT = 1 << 16
_ADD_TABLE_LIMIT = 1 << 10
_DIGIT_CACHE_LIMIT = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# raw polynomial arithmetic over F_p (dense coefficient tuples, constant first)
# ---------------------------------------------------------------------------

def _poly_trim(c: Sequence[int]) -> tuple[int, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> tuple[int, ...]:
    """a*b reduced modulo the monic polynomial mod, all over F_p."""
    e = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    for i in range(len(prod) - 1, e - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(e):
                prod[i - e + j] = (prod[i - e + j] - c * mod[j]) % p
    out = prod[:e]
    out += [0] * (e - len(out))
    return tuple(out)


def _poly_divides(g: Sequence[int], m: Sequence[int], p: int) -> bool:
    """Whether monic g divides m over F_p (remainder of trial division is zero)."""
    r = list(m)
    dg = len(g) - 1
    while len(_poly_trim(r)) - 1 >= dg:
        r = list(_poly_trim(r))
        lead = r[-1]
        shift = len(r) - 1 - dg
        for j in range(dg + 1):
            r[shift + j] = (r[shift + j] - lead * g[j]) % p
    return not _poly_trim(r)


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every lower-degree monic polynomial (degrees 1..e//2)."""
    e = len(modulus) - 1
    if e == 1:
        return True
    for deg in range(1, e // 2 + 1):
        for body in range(p ** deg):
            g = []
            x = body
            for _ in range(deg):
                x, r = divmod(x, p)
                g.append(r)
            g.append(1)
            if _poly_divides(g, modulus, p):
                return False
    return True


def _canonical_modulus(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree e over F_p.

    Candidates are compared as constant-first coefficient lists, so
    itertools.product yields them in exactly the right order.
    """
    if e == 1:
        return (0, 1)
    for body in itertools.product(range(p), repeat=e):
        cand = body + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise RuntimeError(f"no irreducible polynomial of degree {e} over F_{p}")  # unreachable


# ---------------------------------------------------------------------------
# field specs and elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """F_{p^e} with an explicit monic irreducible modulus (constant term first)."""

    p: int
    e: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.e < 1:
            raise ValueError("extension degree must be >= 1")
        q = self.p ** self.e
        if q > MAX_FIELD_SIZE:
            raise BudgetError("field size p^e", q.bit_length() - 1, 20)
        object.__setattr__(self, "modulus", tuple(int(c) for c in self.modulus))
        if len(self.modulus) != self.e + 1:
            raise ValueError(f"modulus must have degree {self.e}")
        if self.modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        if any(not (0 <= c < self.p) for c in self.modulus):
            raise ValueError("modulus coefficients must be reduced mod p")
        if not _is_irreducible(self.modulus, self.p):
            raise ValueError(f"modulus {list(self.modulus)} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p ** self.e

    def element(self, value) -> "FieldElement":
        """Build an element from a digit sequence, an index, or another element."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, int):
            digits = kernel(self).digits_of(value % self.q)
            return FieldElement(self, digits)
        digits = tuple(int(v) % self.p for v in value)
        if len(digits) != self.e:
            raise ValueError(f"expected {self.e} digits, got {len(digits)}")
        return FieldElement(self, digits)

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.e)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.e - 1))

    def generator(self) -> "FieldElement":
        """The class of x in F_p[x]/(modulus); equals 0 when e = 1."""
        if self.e == 1:
            return self.zero()
        return FieldElement(self, (0, 1) + (0,) * (self.e - 2))

    def elements(self) -> list["FieldElement"]:
        """All q elements in digit-lexicographic order, zero first."""
        K = kernel(self)
        return [FieldElement(self, K.digits_of(i)) for i in range(self.q)]

    def descriptor(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}


@functools.lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> FieldSpec:
    """Canonical FieldSpec for F_{p^e}; deterministic across runs and platforms."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** e > MAX_FIELD_SIZE:
        raise BudgetError("field size p^e", (p ** e).bit_length() - 1, 20)
    return FieldSpec(p, e, _canonical_modulus(p, e))


@dataclass(frozen=True)
class FieldElement:
    """Element of F_{p^e} as a digit vector of length e, digits in [0, p)."""

    spec: FieldSpec
    digits: tuple[int, ...]

    def __post_init__(self):
        if len(self.digits) != self.spec.e:
            raise ValueError("wrong number of digits")
        p = self.spec.p
        if any(not (0 <= d < p) for d in self.digits):
            raise ValueError("digits must be reduced mod p")

    @property
    def index(self) -> int:
        acc = 0
        for d in reversed(self.digits):
            acc = acc * self.spec.p + d
        return acc

    def is_zero(self) -> bool:
        return not any(self.digits)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _peer(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError("expected a FieldElement")
        if other.spec != self.spec:
            raise ValueError("mismatched FieldSpec")

    def __add__(self, other):
        self._peer(other)
        K = kernel(self.spec)
        return FieldElement(self.spec, K.digits_of(K.add(self.index, other.index)))

    def __sub__(self, other):
        self._peer(other)
        K = kernel(self.spec)
        return FieldElement(self.spec, K.digits_of(K.sub(self.index, other.index)))

    def __mul__(self, other):
        self._peer(other)
        K = kernel(self.spec)
        return FieldElement(self.spec, K.digits_of(K.mul(self.index, other.index)))

    def __neg__(self):
        K = kernel(self.spec)
        return FieldElement(self.spec, K.digits_of(K.neg(self.index)))

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero")
        K = kernel(self.spec)
        return FieldElement(self.spec, K.digits_of(K.inv(self.index)))

    def __pow__(self, k: int) -> "FieldElement":
        K = kernel(self.spec)
        return FieldElement(self.spec, K.digits_of(K.pow(self.index, k)))

    def frobenius(self, times: int = 1) -> "FieldElement":
        """a -> a^(p^times)."""
        return self ** (self.spec.p ** times)

    def __repr__(self):
        return f"FieldElement(q={self.spec.q}, digits={list(self.digits)})"


# ---------------------------------------------------------------------------
# arithmetic kernel on element indices
# ---------------------------------------------------------------------------

class _Kernel:
    """Index-level arithmetic for one FieldSpec.

    Indices encode digit vectors as integers in base p. Multiplication uses
    discrete-log tables when q is small enough, addition uses a full table,
    XOR (p = 2), or digit arithmetic. All closures are pure functions.
    """

    __slots__ = ("spec", "p", "e", "q", "add", "sub", "mul", "neg", "inv", "pow",
                 "digits_of", "index_of", "_exp", "_log")

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        p, e, q = spec.p, spec.e, spec.q
        self.p, self.e, self.q = p, e, q

        if e == 1:
            self._build_prime(p)
        elif p == 2:
            self._build_binary(spec)
        else:
            self._build_odd_ext(spec)

        if q <= _DIGIT_CACHE_LIMIT:
            digit_table = [self._digits_direct(i) for i in range(q)]
            self.digits_of = digit_table.__getitem__
        else:
            self.digits_of = self._digits_direct

    def _digits_direct(self, idx: int) -> tuple[int, ...]:
        p, e = self.p, self.e
        out = []
        for _ in range(e):
            idx, r = divmod(idx, p)
            out.append(r)
        return tuple(out)

    def _index_direct(self, digits: Sequence[int]) -> int:
        acc = 0
        for d in reversed(digits):
            acc = acc * self.p + d
        return acc

    # -- prime field -------------------------------------------------------
    def _build_prime(self, p: int) -> None:
        self.add = lambda a, b: (a + b) % p
        self.sub = lambda a, b: (a - b) % p
        self.mul = lambda a, b: (a * b) % p
        self.neg = lambda a: (-a) % p
        self.inv = lambda a: pow(a, p - 2, p) if a else self._zero_div()
        self.pow = lambda a, k: pow(a, k, p)
        self.index_of = self._index_direct

    @staticmethod
    def _zero_div():
        raise ZeroDivisionError("inversion of zero")

    # -- F_{2^e}: indices are coefficient bitmasks --------------------------
    def _build_binary(self, spec: FieldSpec) -> None:
        e, q = spec.e, spec.q
        mod_mask = 0
        for i, c in enumerate(spec.modulus):
            if c:
                mod_mask |= 1 << i

        def mul_raw(a: int, b: int) -> int:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
            for i in range(2 * e - 2, e - 1, -1):
                if (r >> i) & 1:
                    r ^= mod_mask << (i - e)
            return r

        self.add = lambda a, b: a ^ b
        self.sub = self.add
        self.neg = lambda a: a
        self.index_of = self._index_direct
        self._finish_mul(mul_raw, q)

    # -- F_{p^e}, p odd ------------------------------------------------------
    def _build_odd_ext(self, spec: FieldSpec) -> None:
        p, e, q = spec.p, spec.e, spec.q
        mod = spec.modulus
        digits_direct = self._digits_direct
        index_direct = self._index_direct

        def mul_raw(a: int, b: int) -> int:
            if a == 0 or b == 0:
                return 0
            prod = _poly_mulmod(digits_direct(a), digits_direct(b), mod, p)
            return index_direct(prod)

        if q <= _ADD_TABLE_LIMIT:
            table = []
            for a in range(q):
                da = digits_direct(a)
                row = []
                for b in range(q):
                    db = digits_direct(b)
                    row.append(index_direct([(x + y) % p for x, y in zip(da, db)]))
                table.append(tuple(row))
            tbl = tuple(table)
            self.add = lambda a, b: tbl[a][b]
        else:
            def add_digits(a: int, b: int) -> int:
                da, db = digits_direct(a), digits_direct(b)
                return index_direct([(x + y) % p for x, y in zip(da, db)])
            self.add = add_digits

        neg_tbl = tuple(index_direct([(-x) % p for x in digits_direct(a)]) for a in range(q))
        self.neg = neg_tbl.__getitem__
        add = self.add
        self.sub = lambda a, b: add(a, neg_tbl[b])
        self.index_of = index_direct
        self._finish_mul(mul_raw, q)

    # -- multiplication via exp/log tables, or raw fallback -----------------
    def _finish_mul(self, mul_raw, q: int) -> None:
        if q > _MUL_TABLE_LIMIT:
            self.mul = mul_raw

            def pow_raw(a: int, k: int) -> int:
                if k < 0:
                    return pow_raw(self.inv(a), -k)
                r, base = 1, a
                while k:
                    if k & 1:
                        r = mul_raw(r, base)
                    base = mul_raw(base, base)
                    k >>= 1
                return r

            self.pow = pow_raw
            self.inv = lambda a: pow_raw(a, q - 2) if a else self._zero_div()
            return

        order = q - 1
        factors = _prime_factors(order)
        gen = None
        for cand in range(2, q):
            ok = True
            for f in factors:
                a, k = cand, order // f
                r = 1
                while k:
                    if k & 1:
                        r = mul_raw(r, a)
                    a = mul_raw(a, a)
                    k >>= 1
                if r == 1:
                    ok = False
                    break
            if ok:
                gen = cand
                break
        if gen is None:
            gen = 1  # q = 2: trivial multiplicative group

        exp = [1] * (2 * order)
        cur = 1
        for i in range(1, order):
            cur = mul_raw(cur, gen)
            exp[i] = cur
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        log = [0] * q
        for i in range(order):
            log[exp[i]] = i
        exp_t, log_t = tuple(exp), tuple(log)
        self._exp, self._log = exp_t, log_t

        def mul(a: int, b: int) -> int:
            if a == 0 or b == 0:
                return 0
            return exp_t[log_t[a] + log_t[b]]

        def inv(a: int) -> int:
            if a == 0:
                raise ZeroDivisionError("inversion of zero")
            return exp_t[order - log_t[a]]

        def pw(a: int, k: int) -> int:
            if a == 0:
                return 0 if k else 1
            return exp_t[(log_t[a] * k) % order]

        self.mul, self.inv, self.pow = mul, inv, pw


@functools.lru_cache(maxsize=None)
def kernel(spec: FieldSpec) -> _Kernel:
    return _Kernel(spec)


# ---------------------------------------------------------------------------
# subfield embeddings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldEmbedding:
    """Ring embedding F_{p^e} -> F_{p^{e*l}} determined by the generator image."""

    source: FieldSpec
    target: FieldSpec
    image_of_generator: FieldElement

    @property
    def degree(self) -> int:
        """l = [target : source]."""
        return self.target.e // self.source.e

    @functools.cached_property
    def _gen_powers(self) -> tuple[int, ...]:
        K = kernel(self.target)
        g = self.image_of_generator.index
        powers = [1]
        for _ in range(self.source.e - 1):
            powers.append(K.mul(powers[-1], g))
        return tuple(powers)

    def apply_index(self, idx: int) -> int:
        """Image in the target, on element indices."""
        K = kernel(self.target)
        src_digits = kernel(self.source).digits_of(idx)
        acc = 0
        for d, gp in zip(src_digits, self._gen_powers):
            if d:
                # d is a prime-field scalar: add gp to itself d times
                term = 0
                for _ in range(d):
                    term = K.add(term, gp)
                acc = K.add(acc, term)
        return acc

    def apply(self, a: FieldElement) -> FieldElement:
        if a.spec != self.source:
            raise ValueError("element does not belong to the embedding source")
        K = kernel(self.target)
        return FieldElement(self.target, K.digits_of(self.apply_index(a.index)))

    @functools.cached_property
    def preimage_index(self) -> dict[int, int]:
        """Map image index -> source index over the whole source field."""
        return {self.apply_index(i): i for i in range(self.source.q)}


def _check_embedding(emb: FieldEmbedding) -> None:
    # sampled ring-homomorphism check on 100 deterministic pairs
    rng = SplitMix64((emb.source.q << 32) ^ emb.target.q ^ 0xE5BEDD1)
    q = emb.source.q
    Ks, Kt = kernel(emb.source), kernel(emb.target)
    seen = {}
    for _ in range(100):
        a, b = rng.below(q), rng.below(q)
        fa, fb = emb.apply_index(a), emb.apply_index(b)
        if emb.apply_index(Ks.add(a, b)) != Kt.add(fa, fb):
            raise RuntimeError("embedding is not additive")
        if emb.apply_index(Ks.mul(a, b)) != Kt.mul(fa, fb):
            raise RuntimeError("embedding is not multiplicative")
        if a in seen and seen[a] != fa:
            raise RuntimeError("embedding is not a function")
        seen[a] = fa
        if fa == 0 and a != 0:
            raise RuntimeError("embedding is not injective")


@functools.lru_cache(maxsize=None)
def embed(src: FieldSpec, tgt: FieldSpec) -> FieldEmbedding:
    """Embedding of src into tgt via the least root of src.modulus in tgt.

    Requires equal characteristic and src.e | tgt.e; a root always exists
    then. The least root in index (digit-lexicographic) order makes the
    result deterministic.
    """
    if src.p != tgt.p:
        raise ValueError("embeddings need equal characteristic")
    if tgt.e % src.e != 0:
        raise ValueError(f"degree {src.e} does not divide {tgt.e}")
    Kt = kernel(tgt)
    mod = src.modulus
    p = src.p
    root = None
    for z in range(tgt.q):
        # Horner evaluation of src.modulus at z; coefficients are prime scalars
        acc = 0
        for c in reversed(mod):
            acc = Kt.mul(acc, z)
            for _ in range(c):
                acc = Kt.add(acc, 1)
        if acc == 0:
            root = z
            break
    if root is None:
        raise RuntimeError("no root found; modulus invariants violated")  # unreachable under pre
    emb = FieldEmbedding(src, tgt, FieldElement(tgt, Kt.digits_of(root)))
    _check_embedding(emb)
    return emb
