"""Finite fields GF(3^k), k <= 10, in a Conway-compatible tower.

Elements are plain ints.  Inside a :class:`GF` the value 0 is zero and a
nonzero element ``g^e`` (``g`` the root of the registered Conway
polynomial, which is primitive) is stored as ``e + 1``.  Multiplication,
Frobenius, embeddings and squareness tests are then index arithmetic, and
addition goes through a Zech-logarithm table.  With this convention the
prime field GF(3) stores 0, 1, 2 as themselves (its Conway root is 2).

Coefficient tuples w.r.t. the power basis are available through
:meth:`GF.coeffs` / :meth:`GF.from_coeffs`; the integer whose base-3 digits
are the coefficients is the *packed* form used by the vectorised kernels.

Fields beyond the tower (needed only transiently, when an eliminant has an
irreducible factor of large degree) are handled by :class:`ResidueField`,
which shares the element interface but does plain polynomial arithmetic.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

P = 3
MAX_DEGREE = 10

# Conway polynomials for p = 3, coefficients lowest degree first.
CONWAY = {
    1: (1, 1),
    2: (2, 2, 1),
    3: (1, 2, 0, 1),
    4: (2, 0, 0, 2, 1),
    5: (1, 2, 0, 0, 0, 1),
    6: (2, 2, 1, 0, 2, 0, 1),
    7: (1, 0, 2, 0, 0, 0, 0, 1),
    8: (2, 2, 2, 0, 1, 2, 0, 0, 1),
    9: (1, 1, 2, 2, 0, 0, 0, 0, 0, 1),
    10: (2, 1, 0, 0, 2, 2, 2, 0, 0, 0, 1),
}


class FieldError(ValueError):
    pass


class ReducibleModulus(FieldError):
    pass


# --- tiny GF(3)[x] helpers on digit lists (used for tables and moduli checks)

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _f3_mod(a, m):
    a = list(a)
    dm = len(m) - 1
    inv = 1 if m[-1] == 1 else 2
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k] * inv % 3
        if c:
            for j in range(dm + 1):
                a[k - dm + j] = (a[k - dm + j] - c * m[j]) % 3
    return _trim(a[:dm])


def _f3_monic_polys(deg):
    for n in range(P ** deg):
        digits = []
        for _ in range(deg):
            digits.append(n % 3)
            n //= 3
        yield digits + [1]


@lru_cache(maxsize=None)
def _f3_irreducibles(deg):
    out = []
    for f in _f3_monic_polys(deg):
        if is_irreducible_f3(f, _check_small=deg):
            out.append(tuple(f))
    return out


def is_irreducible_f3(f, _check_small=None):
    """Irreducibility over GF(3) by trial division by monic irreducibles of degree <= deg/2."""
    f = _trim(list(f))
    n = len(f) - 1
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for g in _f3_irreducibles(d):
            if not _f3_mod(f, list(g)):
                return False
    return True


def _f3_mul(a, b):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] = (r[i + j] + x * y) % 3
    return _trim(r)


def _f3_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % 3 for x, y in zip(a, b)])


def _f3_divmod(a, b):
    a = _trim(list(a))
    b = _trim(list(b))
    inv = b[-1]  # 1 and 2 are self-inverse mod 3
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % 3
        s = len(a) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] = (a[s + i] - c * y) % 3
        a = _trim(a)
    return _trim(q), a


def _to_digits(n, k):
    out = []
    for _ in range(k):
        out.append(n % 3)
        n //= 3
    return out


def _from_digits(ds):
    n = 0
    for d in reversed(ds):
        n = 3 * n + d
    return n


class GF:
    """GF(3^k) with Zech-log arithmetic (see module docstring for the encoding)."""

    def __init__(self, degree: int, modulus=None):
        if not 1 <= degree <= MAX_DEGREE:
            raise FieldError(f"degree {degree} outside 1..{MAX_DEGREE}")
        modulus = tuple(CONWAY[degree] if modulus is None else modulus)
        if len(modulus) != degree + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of the field degree")
        if not is_irreducible_f3(modulus):
            raise ReducibleModulus(f"modulus {modulus} is reducible over GF(3)")
        self.degree = degree
        self.modulus = modulus
        self.q = P ** degree
        self.n = self.q - 1
        self.half = self.n // 2
        self._build_tables()

    def _build_tables(self):
        k, q, n = self.degree, self.q, self.n
        low = [(-c) % 3 for c in self.modulus[:-1]]  # x^k = sum low[i] x^i
        exp = np.zeros(n, dtype=np.int64)
        cur = [0] * k
        if k == 1:
            cur = [1]
        else:
            cur[0] = 1
        for e in range(n):
            exp[e] = _from_digits(cur)
            if k == 1:
                cur = [cur[0] * (-self.modulus[0]) % 3]
                continue
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c + top * l) % 3 for c, l in zip(cur, low)]
        logt = np.full(q, -1, dtype=np.int64)
        logt[exp] = np.arange(n)
        if (logt[1:] < 0).any():
            raise FieldError(f"modulus {self.modulus} is not primitive")
        # stored value of a packed coefficient integer
        self.pack_to_val = np.concatenate([[0], logt[1:] + 1]).astype(np.int64)
        self.val_to_pack = np.concatenate([[0], exp]).astype(np.int64)
        low_digit = exp % 3
        plus_one = exp - low_digit + (low_digit + 1) % 3
        self.zech_np = self.pack_to_val[plus_one]
        self.zech = self.zech_np.tolist()

    # -- basic arithmetic on stored ints
    zero = 0
    one = 1

    def add(self, a, b):
        if not a:
            return b
        if not b:
            return a
        n = self.n
        z = self.zech[(b - a) % n]
        if not z:
            return 0
        return (a + z - 2) % n + 1

    def neg(self, a):
        if not a:
            return 0
        return (a - 1 + self.half) % self.n + 1

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return 0
        return (a + b - 2) % self.n + 1

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return (1 - a) % self.n + 1

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e == 0:
            return 1
        if not a:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 0
        return ((a - 1) * e) % self.n + 1

    def frob(self, a, times=1):
        if not a:
            return 0
        return ((a - 1) * pow(3, times % self.degree, self.n)) % self.n + 1 if self.n > 1 else a

    def pth_root(self, a):
        return self.frob(a, self.degree - 1)

    def is_square(self, a):
        return a == 0 or (a - 1) % 2 == 0

    def sqrt(self, a):
        if not a:
            return 0
        if (a - 1) % 2:
            raise FieldError("not a square")
        return (a - 1) // 2 + 1

    def log(self, a):
        if not a:
            raise FieldError("log of zero")
        return a - 1

    def gen_pow(self, e):
        return e % self.n + 1

    # -- elementwise arithmetic on numpy arrays of stored values
    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return np.where((a == 0) | (b == 0), 0, (a + b - 2) % self.n + 1)

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        z = self.zech_np[(b - a) % self.n]
        s = np.where(z == 0, 0, (a + z - 2) % self.n + 1)
        return np.where(a == 0, b, np.where(b == 0, a, s))

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        return np.where(a == 0, 0, (a - 1 + self.half) % self.n + 1)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        return np.where(a == 0, 0, (1 - a) % self.n + 1)

    def vpow(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, ((a - 1) * e) % self.n + 1)

    # -- conversions
    def from_int(self, r):
        """Image of the residue r mod 3."""
        r %= 3
        if r == 0:
            return 0
        return 1 if r == 1 else self.half + 1

    def to_int(self, a):
        """Inverse of :meth:`from_int`; raises if a is not in GF(3)."""
        if not a:
            return 0
        if a == 1:
            return 1
        if a == self.half + 1:
            return 2
        raise FieldError("element not in the prime field")

    def from_coeffs(self, coeffs):
        coeffs = list(coeffs) + [0] * (self.degree - len(coeffs))
        if len(coeffs) != self.degree:
            raise FieldError("too many coefficients")
        return int(self.pack_to_val[_from_digits([c % 3 for c in coeffs])])

    def coeffs(self, a):
        return tuple(_to_digits(int(self.val_to_pack[a]), self.degree))

    def packed(self, a):
        return int(self.val_to_pack[a])

    def in_subfield(self, a, d):
        if self.degree % d:
            return False
        if not a:
            return True
        return (a - 1) % (self.n // (P ** d - 1)) == 0

    def minimal_degree(self, a):
        for d in _divisors(self.degree):
            if self.in_subfield(a, d):
                return d
        return self.degree

    def elements(self):
        return range(self.q)

    def random(self, rng=random):
        return rng.randrange(self.q)

    def random_nonzero(self, rng=random):
        return rng.randrange(1, self.q)

    def __repr__(self):
        return f"GF(3^{self.degree})"

    def __reduce__(self):
        return (get_field, (self.degree,))

    def format(self, a):
        if not a:
            return "0"
        if self.degree == 1:
            return str(a)
        e = a - 1
        if e == 0:
            return "1"
        if e == self.half:
            return "2"
        return f"ζ{self.degree}^{e}"


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def get_field(degree: int) -> GF:
    """Cached Conway field GF(3^degree)."""
    return GF(degree)


def embed_value(a: int, src: int, dst: int) -> int:
    """Image of a stored GF(3^src) value inside GF(3^dst) (src | dst)."""
    if dst % src:
        raise FieldError(f"GF(3^{src}) does not embed in GF(3^{dst})")
    if not a:
        return 0
    if src == dst:
        return a
    ns, nd = P ** src - 1, P ** dst - 1
    return ((a - 1) * (nd // ns)) % nd + 1


def restrict_value(a: int, src: int, dst: int) -> int:
    """Inverse of :func:`embed_value`: value in GF(3^dst) of an element of GF(3^src) lying there."""
    if not a:
        return 0
    ns, nd = P ** src - 1, P ** dst - 1
    step = ns // nd
    if (a - 1) % step:
        raise FieldError(f"element not in GF(3^{dst})")
    return (a - 1) // step + 1


class FieldTower:
    """Compatible Conway fields GF(3^k) for k = 1..max_degree."""

    def __init__(self, max_degree: int = MAX_DEGREE, moduli=None):
        if not 1 <= max_degree <= MAX_DEGREE:
            raise FieldError(f"max_degree must lie in 1..{MAX_DEGREE}")
        self.max_degree = max_degree
        moduli = moduli or {}
        self.fields = {}
        for k in range(1, max_degree + 1):
            if k in moduli and tuple(moduli[k]) != CONWAY[k]:
                self.fields[k] = GF(k, moduli[k])
            else:
                self.fields[k] = get_field(k)
        self._check_compatibility()

    @property
    def moduli(self):
        return {k: f.modulus for k, f in self.fields.items()}

    def __getitem__(self, k) -> GF:
        return self.fields[k]

    def _check_compatibility(self):
        # g_b^((3^b-1)/(3^a-1)) must be a root of the degree-a modulus
        for b, Fb in self.fields.items():
            for a in _divisors(b):
                if a == b:
                    continue
                root = Fb.gen_pow((Fb.n) // (P ** a - 1))
                acc = 0
                for c in reversed(self.fields[a].modulus):
                    acc = Fb.add(Fb.mul(acc, root), Fb.from_int(c))
                if acc:
                    raise FieldError(f"moduli of degrees {a} and {b} are not compatible")

    def embed(self, a: "FieldElement", target_degree: int) -> "FieldElement":
        return a.embed(target_degree)

    def manifest(self) -> str:
        lines = ["# GF(3^k) tower, modulus coefficients lowest degree first"]
        for k, F in self.fields.items():
            lines.append(f"{k}: " + ",".join(str(c) for c in F.modulus))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_manifest(cls, text: str) -> "FieldTower":
        moduli = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            k, _, cs = line.partition(":")
            moduli[int(k)] = tuple(int(c) for c in cs.split(","))
        return cls(max(moduli), moduli)


def make_tower(max_degree: int = MAX_DEGREE) -> FieldTower:
    return FieldTower(max_degree)


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(3^degree); ``value`` uses the stored encoding."""

    degree: int
    value: int

    @property
    def field(self) -> GF:
        return get_field(self.degree)

    @classmethod
    def from_coeffs(cls, coeffs, degree=None):
        coeffs = tuple(coeffs)
        degree = degree or len(coeffs)
        return cls(degree, get_field(degree).from_coeffs(coeffs))

    @classmethod
    def gen(cls, degree, e=1):
        return cls(degree, get_field(degree).gen_pow(e))

    @classmethod
    def from_int(cls, r, degree=1):
        return cls(degree, get_field(degree).from_int(r))

    @property
    def coeffs(self):
        return self.field.coeffs(self.value)

    def _other(self, b):
        if isinstance(b, int):
            return self.field.from_int(b)
        if not isinstance(b, FieldElement):
            return NotImplemented
        if b.degree != self.degree:
            raise FieldError(
                f"mixed operands GF(3^{self.degree}) and GF(3^{b.degree}); embed first")
        return b.value

    def __add__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else FieldElement(self.degree, self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else FieldElement(self.degree, self.field.sub(self.value, v))

    def __rsub__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else FieldElement(self.degree, self.field.sub(v, self.value))

    def __mul__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else FieldElement(self.degree, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else FieldElement(self.degree, self.field.div(self.value, v))

    def __neg__(self):
        return FieldElement(self.degree, self.field.neg(self.value))

    def __pow__(self, e):
        return FieldElement(self.degree, self.field.pow(self.value, e))

    def __bool__(self):
        return self.value != 0

    def frobenius(self, times=1):
        return FieldElement(self.degree, self.field.frob(self.value, times))

    def embed(self, target_degree):
        return FieldElement(target_degree, embed_value(self.value, self.degree, target_degree))

    def is_square(self):
        return self.field.is_square(self.value)

    def minimal_degree(self):
        return self.field.minimal_degree(self.value)

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"FieldElement({self})"


def field_arith(a: FieldElement, b, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown op {op!r}")


def frobenius(a: FieldElement, times: int = 1) -> FieldElement:
    return a.frobenius(times)


def embed(a: FieldElement, target_degree: int) -> FieldElement:
    return a.embed(target_degree)


def is_square(a: FieldElement) -> bool:
    return a.is_square()


_ELEM_RE = re.compile(r"^\s*(?:ζ|zeta|Z)(\d+)\s*\^\s*(-?\d+)\s*$")


def parse_value(text: str, degree: int) -> int:
    """Parse ``"ζk^e"``, ``"(c0,c1,..)"`` or an integer into a stored GF(3^degree) value."""
    F = get_field(degree)
    text = text.strip()
    m = _ELEM_RE.match(text)
    if m:
        k, e = int(m.group(1)), int(m.group(2))
        return embed_value(get_field(k).gen_pow(e), k, degree)
    if text.startswith("("):
        cs = [int(c) for c in text.strip("()").split(",") if c.strip()]
        src = len(cs)
        return embed_value(get_field(src).from_coeffs(cs), src, degree)
    return F.from_int(int(text))


def parse_element(text: str, degree: int | None = None) -> FieldElement:
    text = text.strip()
    if degree is None:
        m = _ELEM_RE.match(text)
        if m:
            degree = int(m.group(1))
        elif text.startswith("("):
            degree = len([c for c in text.strip("()").split(",") if c.strip()])
        else:
            degree = 1
    return FieldElement(degree, parse_value(text, degree))


class ResidueField:
    """GF(3)[x]/(m) for an arbitrary irreducible m; same element interface as :class:`GF`.

    Elements are packed coefficient integers.  Slow; used only for
    transient fields of degree above the tower.
    """

    zero = 0
    one = 1

    def __init__(self, modulus):
        m = _trim([c % 3 for c in modulus])
        if m[-1] != 1:
            inv = 2
            m = [c * inv % 3 for c in m]
        self.modulus = tuple(m)
        self.degree = len(m) - 1
        self.q = P ** self.degree
        self.n = self.q - 1

    def _d(self, a):
        return _to_digits(a, self.degree)

    def _p(self, ds):
        return _from_digits(list(ds) + [0] * (self.degree - len(ds)))

    def add(self, a, b):
        return self._p([(x + y) % 3 for x, y in zip(self._d(a), self._d(b))])

    def neg(self, a):
        return self._p([(-x) % 3 for x in self._d(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return 0
        x, y = self._d(a), self._d(b)
        r = [0] * (2 * self.degree - 1)
        for i, c in enumerate(x):
            if c:
                for j, d in enumerate(y):
                    if d:
                        r[i + j] = (r[i + j] + c * d) % 3
        return self._p(_f3_mod(r, list(self.modulus)))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    @property
    def gen(self):
        """The class of x."""
        return self._p([0, 1]) if self.degree > 1 else self.from_int(-self.modulus[0])

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in GF(3)[x]; the loop ends on a nonzero constant remainder
        r0, r1 = list(self.modulus), _trim(list(self._d(a)))
        s0, s1 = [], [1]
        while len(r1) > 1:
            q, r = _f3_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _f3_sub(s0, _f3_mul(q, s1))
        c = r1[0]  # s1 * a = c mod m, and c^-1 = c in GF(3)
        return self._p([x * c % 3 for x in s1])  # c^-1 = c in GF(3)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def frob(self, a, times=1):
        return self.pow(a, P ** (times % self.degree))

    def pth_root(self, a):
        return self.frob(a, self.degree - 1)

    def is_square(self, a):
        return a == 0 or self.pow(a, self.n // 2) == 1

    def from_int(self, r):
        return r % 3

    def to_int(self, a):
        if a >= 3:
            raise FieldError("element not in the prime field")
        return a

    def random(self, rng=random):
        return rng.randrange(self.q)

    def random_nonzero(self, rng=random):
        return rng.randrange(1, self.q)

    def format(self, a):
        return "(" + ",".join(map(str, self._d(a))) + ")"

    def __repr__(self):
        return f"GF(3)[x]/({self.modulus})"
