"""Arithmetic in small finite fields F_{p^r}.

Elements are polynomials over F_p reduced modulo a monic irreducible of
degree r, stored as little-endian coefficient tuples.  Fields are meant to
stay small (the classification work never needs more than p^r around 10^4,
with quadratic extensions up to the hard guard of 2^20), so all algorithms
favour clarity over asymptotics: irreducibility by trial factor search,
square roots by scanning, element orders by factoring q - 1.
"""

from __future__ import annotations

import itertools

SIZE_GUARD = 1 << 20
_TABLE_MAX = 4096  # build int multiplication tables only for tiny fields


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---- polynomial helpers over F_p (little-endian coefficient lists) ----

def _poly_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mul(f, g, p):
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                out[i + j] = (out[i + j] + fi * gj) % p
    return _poly_trim(out)


def _poly_divmod(f, g, p):
    f = list(f)
    dg = len(g) - 1
    lead_inv = pow(g[-1], p - 2, p)
    q = [0] * max(len(f) - dg, 0)
    while len(f) - 1 >= dg and f:
        shift = len(f) - 1 - dg
        c = f[-1] * lead_inv % p
        q[shift] = c
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        _poly_trim(f)
    return q, f


def _poly_mod(f, g, p):
    return _poly_divmod(f, g, p)[1]


def _is_irreducible(f, p) -> bool:
    """Trial search: no root for degree <= 3, else no factor of degree <= deg/2."""
    deg = len(f) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    if deg <= 3:
        return all(_poly_eval(f, x, p) != 0 for x in range(p))
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            if not _poly_mod(f, g, p):
                return False
    return True


def _poly_eval(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


class FieldSpec:
    """A concrete model of F_{p^r}: characteristic, degree and modulus."""

    def __init__(self, p: int, r: int, modulus: tuple[int, ...]):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if r < 1:
            raise ValueError("degree must be >= 1")
        if p ** r > SIZE_GUARD:
            raise ValueError(f"field size {p}^{r} exceeds guard {SIZE_GUARD}")
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != r + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree r")
        if not _is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.r = r
        self.modulus = modulus
        self.q = p ** r
        self._mul_table = None
        self._inv_table = None

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.r, self.modulus) == (other.p, other.r, other.modulus))

    def __hash__(self):
        return hash((self.p, self.r, self.modulus))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, r={self.r})"

    # -- element construction ----------------------------------------------

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, int):
            # integers embed through the prime field
            return FieldElement(self, (value % self.p,) + (0,) * (self.r - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.r:
            raise ValueError("too many coefficients")
        coeffs = coeffs + (0,) * (self.r - len(coeffs))
        return FieldElement(self, coeffs)

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def from_int(self, k: int) -> "FieldElement":
        """Decode 0 <= k < q as base-p digits (the canonical enumeration)."""
        k %= self.q
        coeffs = []
        for _ in range(self.r):
            coeffs.append(k % self.p)
            k //= self.p
        return FieldElement(self, tuple(coeffs))

    def elements(self):
        for k in range(self.q):
            yield self.from_int(k)

    # -- integer-encoded arithmetic (hot path for matrix groups) -----------

    def _encode(self, coeffs) -> int:
        k = 0
        for c in reversed(coeffs):
            k = k * self.p + c
        return k

    def _decode(self, k: int) -> tuple[int, ...]:
        coeffs = []
        for _ in range(self.r):
            coeffs.append(k % self.p)
            k //= self.p
        return tuple(coeffs)

    def _build_tables(self):
        q = self.q
        mul = [[0] * q for _ in range(q)]
        for i in range(q):
            ci = list(self._decode(i))
            for j in range(i, q):
                prod = _poly_mod(_poly_mul(ci, list(self._decode(j)), self.p),
                                 list(self.modulus), self.p)
                v = self._encode(tuple(prod) + (0,) * self.r)
                mul[i][j] = v
                mul[j][i] = v
        # publish the product table first so _pow_i below can use it
        self._mul_table = mul
        inv = [0] * q
        for i in range(1, q):
            inv[i] = self._pow_i(i, q - 2)
        self._inv_table = inv

    def add_i(self, x: int, y: int) -> int:
        if self.r == 1:
            return (x + y) % self.p
        cx, cy = self._decode(x), self._decode(y)
        return self._encode(tuple((a + b) % self.p for a, b in zip(cx, cy)))

    def sub_i(self, x: int, y: int) -> int:
        if self.r == 1:
            return (x - y) % self.p
        cx, cy = self._decode(x), self._decode(y)
        return self._encode(tuple((a - b) % self.p for a, b in zip(cx, cy)))

    def neg_i(self, x: int) -> int:
        if self.r == 1:
            return (-x) % self.p
        return self._encode(tuple((-a) % self.p for a in self._decode(x)))

    def mul_i(self, x: int, y: int) -> int:
        if self.r == 1:
            return (x * y) % self.p
        if self._mul_table is None and self.q <= _TABLE_MAX:
            self._build_tables()
        if self._mul_table is not None:
            return self._mul_table[x][y]
        prod = _poly_mod(_poly_mul(list(self._decode(x)), list(self._decode(y)), self.p),
                         list(self.modulus), self.p)
        return self._encode(tuple(prod) + (0,) * self.r)

    def _pow_i(self, x: int, n: int) -> int:
        acc = self._encode((1,) + (0,) * (self.r - 1))
        base = x
        while n:
            if n & 1:
                acc = self.mul_i(acc, base)
            base = self.mul_i(base, base)
            n >>= 1
        return acc

    def inv_i(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.r == 1:
            return pow(x, self.p - 2, self.p)
        if self._inv_table is None and self.q <= _TABLE_MAX:
            self._build_tables()
        if self._inv_table is not None:
            return self._inv_table[x]
        return self._pow_i(x, self.q - 2)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    @staticmethod
    def from_json(obj: dict) -> "FieldSpec":
        return FieldSpec(int(obj["p"]), int(obj["r"]), tuple(obj["modulus"]))


class FieldElement:
    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: tuple[int, ...]):
        self.spec = spec
        self.coeffs = coeffs

    def _check(self, other) -> "FieldElement":
        if not isinstance(other, FieldElement):
            other = self.spec.element(other)
        elif other.spec != self.spec:
            raise ValueError("field mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        p = self.spec.p
        return FieldElement(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        other = self._check(other)
        p = self.spec.p
        return FieldElement(self.spec, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        p = self.spec.p
        return FieldElement(self.spec, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        other = self._check(other)
        spec = self.spec
        prod = _poly_mod(_poly_mul(list(self.coeffs), list(other.coeffs), spec.p),
                         list(spec.modulus), spec.p)
        return FieldElement(spec, tuple(prod) + (0,) * (spec.r - len(prod)))

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        acc = self.spec.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def inverse(self) -> "FieldElement":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.spec.q - 2)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def as_int(self) -> int:
        return self.spec._encode(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            if isinstance(other, int):
                return self == self.spec.element(other)
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.spec.p, self.spec.r, self.coeffs))

    def __repr__(self):
        if self.spec.r == 1:
            return str(self.coeffs[0])
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"


def make_field(p: int, r: int = 1, modulus=None) -> FieldSpec:
    """Build F_{p^r}; when no modulus is given pick the least monic irreducible.

    Candidates are enumerated in base-p order of their coefficient vector, so
    the choice is deterministic (F_9 gets x^2 + 1).  For r = 1 the modulus is
    the convention x + 0.
    """
    if modulus is not None:
        return FieldSpec(p, r, tuple(modulus))
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if r == 1:
        return FieldSpec(p, 1, (0, 1))
    if p ** r > 10 ** 4:
        raise ValueError("default-modulus search is limited to p^r <= 10^4")
    for k in range(p ** r):
        tail = []
        kk = k
        for _ in range(r):
            tail.append(kk % p)
            kk //= p
        f = tail + [1]
        if _is_irreducible(f, p):
            return FieldSpec(p, r, tuple(f))
    raise RuntimeError("no irreducible polynomial found")  # unreachable


# ---- number-theoretic symbols ----

def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, via Euler's criterion."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"modulus {p} must be an odd prime")
    a %= p
    if a == 0:
        return 0
    s = pow(a, (p - 1) // 2, p)
    return 1 if s == 1 else -1


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), defined for all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    k = 1
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 == 1 and a % 8 in (3, 5):
        k = -k
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of |n| (small inputs only)."""
    n = abs(n)
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mult_order(a: FieldElement) -> int:
    """Multiplicative order; divides q - 1 (Lagrange), found by descent."""
    if a.is_zero:
        raise ValueError("order of zero is undefined")
    n = a.spec.q - 1
    for p in factorize(n):
        while n % p == 0 and (a ** (n // p)) == a.spec.one():
            n //= p
    return n


def sqrt_in_field(a: FieldElement) -> FieldElement | None:
    """A square root of a, or None; ties broken by least coefficient tuple."""
    spec = a.spec
    if a.is_zero:
        return spec.zero()
    if spec.p == 2:
        # squaring is the Frobenius, hence bijective
        return a ** (spec.q // 2)
    if a ** ((spec.q - 1) // 2) != spec.one():
        return None
    best = None
    for x in spec.elements():
        if x * x == a:
            if best is None or x.coeffs < best.coeffs:
                best = x
    return best


# ---- quadratic extensions and subfield embeddings ----

_EXT_CACHE: dict[FieldSpec, FieldSpec] = {}
_EMBED_CACHE: dict[tuple[FieldSpec, FieldSpec], FieldElement] = {}


def quadratic_extension(spec: FieldSpec) -> FieldSpec:
    """The model of F_{q^2} used for eigenvalue computations over spec."""
    if spec not in _EXT_CACHE:
        _EXT_CACHE[spec] = make_field(spec.p, 2 * spec.r)
    return _EXT_CACHE[spec]


def embed(a: FieldElement, ext: FieldSpec) -> FieldElement:
    """Embed a in an extension field (the degree must divide ext's degree).

    The embedding sends the generator of the base field to the least root of
    the base modulus inside ext, so it is deterministic and consistent across
    calls.
    """
    base = a.spec
    if base.p != ext.p or ext.r % base.r != 0:
        raise ValueError("no embedding: incompatible fields")
    if base == ext:
        return a
    if base.r == 1:
        return ext.element(a.coeffs[0])
    key = (base, ext)
    theta = _EMBED_CACHE.get(key)
    if theta is None:
        mod = list(base.modulus)
        for k in range(ext.q):
            x = ext.from_int(k)
            acc = ext.zero()
            for c in reversed(mod):
                acc = acc * x + ext.element(c)
            if acc.is_zero:
                theta = x
                break
        else:  # pragma: no cover - the modulus always splits in a multiple-degree ext
            raise RuntimeError("modulus has no root in extension")
        _EMBED_CACHE[key] = theta
    acc = ext.zero()
    for c in reversed(a.coeffs):
        acc = acc * theta + ext.element(c)
    return acc


def embedding_table(base: FieldSpec, ext: FieldSpec) -> list[int]:
    """Integer-encoding form of embed: table[x] is the image of encoding x."""
    return [embed(base.from_int(k), ext).as_int() for k in range(base.q)]
