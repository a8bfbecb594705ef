"""Finite chain rings of invariants (q, s) and their Galois extensions.

A :class:`RingSpec` describes one ambient ring S of invariants (q**m, s).  The
base ring R of invariants (q, s) is not stored separately: it is the subring
of S fixed by the relative Frobenius sigma (xi -> xi**q).  Two families are
supported:

* ``galois-ring``: S = Z_{p^s}[x]/(f), theta = p.  Elements are coefficient
  vectors of length D = n*m with entries in [0, p**s).
* ``equal-characteristic``: S = F_{q^m}[u]/(u^s), theta = u.  Elements are
  s blocks of D coefficients mod p; block j holds the u**j coefficient.

In both cases the residue field F_{q^m} is F_p[x]/(g) with g the canonical
primitive polynomial of degree D, and for the Galois-ring family f is the
coefficient-wise lift of g.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

from .errors import InputError, NotUnitError, SizeLimitError

__all__ = [
    "FAMILIES",
    "RingSpec",
    "RingElement",
    "TeichExpansion",
    "make_ring",
    "is_prime",
    "prime_factors",
    "primitive_polynomial",
    "max_ring_bits",
]

FAMILIES = ("galois-ring", "equal-characteristic")
DEFAULT_MAX_RING_BITS = 30


def max_ring_bits() -> int:
    raw = os.environ.get("CHAINCODES_MAX_RING_BITS")
    if raw is None:
        return DEFAULT_MAX_RING_BITS
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"CHAINCODES_MAX_RING_BITS={raw!r} is not an integer") from None


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def prime_factors(n: int) -> list[int]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over Z/modZ, little-endian coefficient lists ---------------

def _polymulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], mod: int) -> tuple[int, ...]:
    """a*b reduced by the monic f (len(f) == D + 1), coefficients mod ``mod``."""
    D = len(f) - 1
    prod = [0] * (2 * D - 1) if D else [0]
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    for i in range(len(prod) - 1, D - 1, -1):
        c = prod[i] % mod
        if c:
            base = i - D
            for k in range(D):
                prod[base + k] -= c * f[k]
        prod[i] = 0
    return tuple(c % mod for c in prod[:D])


def _polypowmod(a, e: int, f, mod: int) -> tuple[int, ...]:
    D = len(f) - 1
    result = tuple([1 % mod] + [0] * (D - 1))
    base = tuple(a)
    while e:
        if e & 1:
            result = _polymulmod(result, base, f, mod)
        base = _polymulmod(base, base, f, mod)
        e >>= 1
    return result


@lru_cache(maxsize=None)
def primitive_polynomial(p: int, degree: int) -> tuple[int, ...]:
    """First monic primitive polynomial over F_p of the given degree.

    Candidates are ordered by their lower coefficients read as a base-p
    integer, constant term least significant.  Returned little-endian with
    the leading 1 included.
    """
    if not is_prime(p):
        raise InputError(f"p={p} is not prime")
    if degree < 1:
        raise InputError("degree must be >= 1")
    order = p ** degree - 1
    cofactors = [order // r for r in prime_factors(order)]
    x = tuple([0, 1] + [0] * (degree - 2)) if degree > 1 else None
    for k in range(p ** degree):
        low = [(k // p ** i) % p for i in range(degree)]
        if low[0] == 0:
            continue
        f = tuple(low) + (1,)
        if degree == 1:
            gen = (-low[0]) % p
            ok = pow(gen, order, p) == 1 and all(pow(gen, c, p) != 1 for c in cofactors)
        else:
            one = tuple([1] + [0] * (degree - 1))
            ok = (_polypowmod(x, order, f, p) == one
                  and all(_polypowmod(x, c, f, p) != one for c in cofactors))
        if ok:
            return f
    raise AssertionError(f"no primitive polynomial of degree {degree} over F_{p}")


# -- the ring -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RingSpec:
    """Ambient ring S of invariants (q**m, s) with base ring R of invariants (q, s)."""

    p: int
    n: int
    s: int
    m: int = 1
    family: str = "galois-ring"
    modulus: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"p={self.p} is not prime")
        for name in ("n", "s", "m"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise InputError(f"{name} must be a positive integer, got {v!r}")
        if self.family not in FAMILIES:
            raise InputError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.size > 2 ** max_ring_bits():
            raise SizeLimitError(
                f"|S| = {self.p}^{self.D * self.s} exceeds 2^{max_ring_bits()} "
                f"(set CHAINCODES_MAX_RING_BITS to override)")
        g = primitive_polynomial(self.p, self.D)
        if not self.modulus:
            object.__setattr__(self, "modulus", g)
        else:
            mod = tuple(int(c) for c in self.modulus)
            if len(mod) != self.D + 1 or mod[-1] != 1:
                raise InputError("modulus must be monic of degree n*m")
            if any(not 0 <= c < self.coeff_mod for c in mod):
                raise InputError("modulus coefficients out of range")
            if tuple(c % self.p for c in mod) != g and self.family == "galois-ring":
                raise InputError("modulus does not reduce to the canonical primitive polynomial")
            if self.family == "equal-characteristic" and mod != g:
                raise InputError("modulus must be the canonical primitive polynomial")
            object.__setattr__(self, "modulus", mod)

    # identity ---------------------------------------------------------------
    def _key(self):
        return (self.p, self.n, self.s, self.m, self.family, self.modulus)

    def __eq__(self, other):
        return isinstance(other, RingSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"RingSpec(p={self.p}, n={self.n}, s={self.s}, m={self.m}, "
                f"family={self.family!r})")

    # sizes ------------------------------------------------------------------
    @property
    def D(self) -> int:
        """Degree of the residue field F_{q^m} over F_p."""
        return self.n * self.m

    @property
    def q(self) -> int:
        """Residue field size of the base ring R."""
        return self.p ** self.n

    @property
    def Q(self) -> int:
        """Residue field size of S (= q**m)."""
        return self.q ** self.m

    @property
    def size(self) -> int:
        return self.Q ** self.s

    @property
    def coeff_mod(self) -> int:
        return self.p ** self.s if self.family == "galois-ring" else self.p

    @property
    def N(self) -> int:
        """Number of ambient coordinates."""
        return self.D if self.family == "galois-ring" else self.D * self.s

    @property
    def name(self) -> str:
        if self.family == "galois-ring":
            if self.s == 1:
                return f"F_{self.Q}"
            if self.D == 1:
                return f"Z_{self.p ** self.s}"
            return f"GR({self.p}^{self.s},{self.D})"
        if self.s == 1:
            return f"F_{self.Q}"
        return f"F_{self.Q}[u]/(u^{self.s})"

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "s": self.s, "m": self.m,
                "family": self.family, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "RingSpec":
        return make_ring(obj["p"], obj["n"], obj["s"], obj.get("m", 1),
                         obj.get("family", "galois-ring"), tuple(obj.get("modulus", ())))

    # raw coefficient-tuple arithmetic --------------------------------------
    def _field_mul(self, a, b):
        return _polymulmod(a, b, self.modulus, self.p)

    def add_c(self, a, b):
        M = self.coeff_mod
        return tuple((x + y) % M for x, y in zip(a, b))

    def sub_c(self, a, b):
        M = self.coeff_mod
        return tuple((x - y) % M for x, y in zip(a, b))

    def neg_c(self, a):
        M = self.coeff_mod
        return tuple((-x) % M for x in a)

    def scale_c(self, a, k: int):
        M = self.coeff_mod
        return tuple((x * k) % M for x in a)

    def mul_c(self, a, b):
        if self.family == "galois-ring":
            return _polymulmod(a, b, self.modulus, self.coeff_mod)
        D, s = self.D, self.s
        out = [0] * (D * s)
        for j1 in range(s):
            blk1 = a[j1 * D:(j1 + 1) * D]
            if not any(blk1):
                continue
            for j2 in range(s - j1):
                blk2 = b[j2 * D:(j2 + 1) * D]
                if not any(blk2):
                    continue
                prod = self._field_mul(blk1, blk2)
                off = (j1 + j2) * D
                for i in range(D):
                    out[off + i] += prod[i]
        return tuple(c % self.p for c in out)

    def valuation_c(self, a) -> int:
        if self.family == "galois-ring":
            v = self.s
            for c in a:
                if c:
                    k = 0
                    while c % self.p == 0:
                        c //= self.p
                        k += 1
                    v = min(v, k)
            return v
        D = self.D
        for j in range(self.s):
            if any(a[j * D:(j + 1) * D]):
                return j
        return self.s

    def div_theta_c(self, a, t: int = 1):
        """Some b with theta**t * b == a; requires valuation(a) >= t."""
        if t == 0:
            return tuple(a)
        if self.valuation_c(a) < t:
            raise NotUnitError("element is not divisible by theta^%d" % t)
        if self.family == "galois-ring":
            d = self.p ** t
            return tuple(c // d for c in a)
        D = self.D
        return tuple(a[t * D:]) + (0,) * (t * D)

    def mul_theta_c(self, a, t: int = 1):
        if t >= self.s:
            return self.zero_c
        if self.family == "galois-ring":
            return self.scale_c(a, self.p ** t)
        D = self.D
        return (0,) * (t * D) + tuple(a[:(self.s - t) * D])

    @cached_property
    def zero_c(self):
        return (0,) * self.N

    @cached_property
    def one_c(self):
        return (1,) + (0,) * (self.N - 1)

    def pow_c(self, a, e: int):
        if e < 0:
            return self.pow_c(self.inverse_c(a), -e)
        result, base = self.one_c, tuple(a)
        while e:
            if e & 1:
                result = self.mul_c(result, base)
            base = self.mul_c(base, base)
            e >>= 1
        return result

    @property
    def unit_group_order(self) -> int:
        return self.Q ** (self.s - 1) * (self.Q - 1)

    def inverse_c(self, a):
        if self.valuation_c(a) != 0:
            raise NotUnitError(f"{self.element(a)!r} is not a unit")
        return self.pow_c(a, self.unit_group_order - 1)

    def teichmuller_c(self, a):
        return self.pow_c(a, self.Q ** (self.s - 1))

    # elements ---------------------------------------------------------------
    def element(self, coeffs) -> "RingElement":
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != self.N:
            raise InputError(f"expected {self.N} coefficients, got {len(coeffs)}")
        M = self.coeff_mod
        return RingElement(self, tuple(c % M for c in coeffs))

    def from_int(self, k: int) -> "RingElement":
        return RingElement(self, self.scale_c(self.one_c, k))

    def __call__(self, value) -> "RingElement":
        if isinstance(value, RingElement):
            if value.spec != self:
                raise InputError("element belongs to a different ring")
            return value
        if isinstance(value, int):
            return self.from_int(value)
        return self.element(value)

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, self.zero_c)

    @property
    def one(self) -> "RingElement":
        return RingElement(self, self.one_c)

    @cached_property
    def theta(self) -> "RingElement":
        if self.s == 1:
            return self.zero
        return RingElement(self, self.mul_theta_c(self.one_c))

    @cached_property
    def x(self) -> "RingElement":
        """The class of the polynomial variable x (a lift of the primitive residue)."""
        if self.D == 1:
            c = (-self.modulus[0]) % self.coeff_mod
            return self.from_int(c)
        return self.element((0, 1) + (0,) * (self.N - 2))

    @cached_property
    def xi(self) -> "RingElement":
        """Teichmuller generator of Gamma(S)*, of order q**m - 1."""
        return RingElement(self, self.teichmuller_c(self.x.c))

    @cached_property
    def base_generator(self) -> "RingElement":
        """Generator of Gamma(R)*, of order q - 1."""
        return self.xi ** ((self.Q - 1) // (self.q - 1))

    def elements(self) -> Iterator["RingElement"]:
        M = self.coeff_mod
        for k in range(self.size):
            coeffs = []
            for _ in range(self.N):
                coeffs.append(k % M)
                k //= M
            yield RingElement(self, tuple(coeffs))

    def teichmuller_set(self, base: bool = False) -> list["RingElement"]:
        """Gamma(S), or Gamma(R) when ``base`` is set; zero first."""
        gen, order = (self.base_generator, self.q - 1) if base else (self.xi, self.Q - 1)
        out = [self.zero]
        g = self.one
        for _ in range(order):
            out.append(g)
            g = g * gen
        return out

    def base_elements(self) -> list["RingElement"]:
        """All q**s elements of R, listed via Teichmuller digits."""
        gam = self.teichmuller_set(base=True)
        out = [self.zero]
        for j in range(self.s):
            th = self.theta ** j
            out = [a + g * th for a in out for g in gam]
        return out

    # Frobenius and trace ------------------------------------------------------
    @cached_property
    def _sigma_images(self) -> tuple[tuple[int, ...], ...]:
        # sigma is additive and fixes the prime ring, so it is determined by
        # its values on the ambient coordinate basis.
        images = []
        for k in range(self.N):
            e = [0] * self.N
            e[k] = 1
            images.append(self.frobenius_by_digits(self.element(e)).c)
        return tuple(images)

    def frobenius_by_digits(self, a: "RingElement", power: int = 1) -> "RingElement":
        """sigma**power computed from the Teichmuller expansion (gamma -> gamma**q)."""
        exp = self.q ** (power % self.m)
        digits = a.teich_expand().digits
        out = self.zero
        th = self.one
        for g in digits:
            out = out + (g ** exp) * th
            th = th * self.theta
        return out

    def sigma_c(self, a):
        M = self.coeff_mod
        out = [0] * self.N
        for k, ak in enumerate(a):
            if ak:
                img = self._sigma_images[k]
                for i in range(self.N):
                    out[i] += ak * img[i]
        return tuple(c % M for c in out)

    def frobenius_c(self, a, power: int = 1):
        for _ in range(power % self.m):
            a = self.sigma_c(a)
        return tuple(a)

    def trace_c(self, a):
        total, cur = tuple(a), tuple(a)
        for _ in range(self.m - 1):
            cur = self.sigma_c(cur)
            total = self.add_c(total, cur)
        return total

    def is_base_c(self, a) -> bool:
        return self.sigma_c(a) == tuple(a)

    # residue field ------------------------------------------------------------
    @cached_property
    def residue_field(self) -> "RingSpec":
        """F_{q^m} as a chain ring with s = 1, sharing the polynomial g."""
        if self.s == 1 and self.family == "galois-ring":
            return self
        return make_ring(self.p, self.n, 1, self.m, "galois-ring")

    def residue_c(self, a):
        if self.family == "galois-ring":
            return tuple(c % self.p for c in a)
        return tuple(a[:self.D])

    def lift(self, r: "RingElement") -> "RingElement":
        """Teichmuller lift of a residue-field element."""
        if r.spec != self.residue_field:
            raise InputError("not an element of this ring's residue field")
        coeffs = tuple(r.c) + (0,) * (self.N - self.D)
        return RingElement(self, self.teichmuller_c(coeffs))

    # roots of unity -------------------------------------------------------------
    def root_of_unity(self, ell: int) -> "RingElement":
        """eta = xi**((q^m - 1)/ell), of multiplicative order exactly ell."""
        if ell < 1 or (self.Q - 1) % ell:
            raise InputError(f"ell={ell} does not divide q^m - 1 = {self.Q - 1}")
        return self.xi ** ((self.Q - 1) // ell)

    # prime-ring view --------------------------------------------------------------
    @cached_property
    def prime_ring(self) -> "RingSpec":
        """Z_{p^s} (Galois-ring family) or F_p (equal characteristic).

        Ambient coordinates of S are coordinates over this ring.
        """
        if self.family == "galois-ring":
            return make_ring(self.p, 1, self.s, 1, "galois-ring")
        return make_ring(self.p, 1, 1, 1, "galois-ring")

    def scalar_basis(self, base: bool) -> list["RingElement"]:
        """Prime-ring basis of the scalar ring modulo theta (R if ``base`` else S).

        Used to enumerate R/theta^k or S/theta^k as prime-ring combinations.
        """
        deg = self.n if base else self.D
        gen = self.base_generator if base else self.xi
        return [gen ** i for i in range(deg)]


@lru_cache(maxsize=None)
def make_ring(p: int, n: int = 1, s: int = 1, m: int = 1,
              family: str = "galois-ring", modulus: tuple[int, ...] = ()) -> RingSpec:
    return RingSpec(p, n, s, m, family, tuple(modulus))


@dataclass(frozen=True)
class TeichExpansion:
    """a = sum_j digits[j] * theta**j with every digit in Gamma(S)."""

    digits: tuple["RingElement", ...]

    def reconstruct(self) -> "RingElement":
        spec = self.digits[0].spec
        out, th = spec.zero, spec.one
        for g in self.digits:
            out = out + g * th
            th = th * spec.theta
        return out


class RingElement:
    """An element of a :class:`RingSpec` in canonical coefficient form."""

    __slots__ = ("spec", "c")

    def __init__(self, spec: RingSpec, coeffs: tuple[int, ...]):
        self.spec = spec
        self.c = coeffs

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.spec is not self.spec and other.spec != self.spec:
                raise InputError("operands live in different rings")
            return other
        if isinstance(other, int):
            return self.spec.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElement(self.spec, self.spec.add_c(self.c, other.c))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElement(self.spec, self.spec.sub_c(self.c, other.c))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return RingElement(self.spec, self.spec.neg_c(self.c))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElement(self.spec, self.spec.mul_c(self.c, other.c))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return RingElement(self.spec, self.spec.pow_c(self.c, e))

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.spec.from_int(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.spec == other.spec and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        if self.spec.N == 1:
            return f"{self.spec.name}({self.c[0]})"
        return f"{self.spec.name}{list(self.c)}"

    def inverse(self) -> "RingElement":
        return RingElement(self.spec, self.spec.inverse_c(self.c))

    def valuation(self) -> int:
        return self.spec.valuation_c(self.c)

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def div_theta(self, t: int = 1) -> "RingElement":
        return RingElement(self.spec, self.spec.div_theta_c(self.c, t))

    def teichmuller(self) -> "RingElement":
        return RingElement(self.spec, self.spec.teichmuller_c(self.c))

    def teich_expand(self) -> TeichExpansion:
        digits = []
        a = self
        for j in range(self.spec.s):
            g = a.teichmuller()
            digits.append(g)
            if j < self.spec.s - 1:
                a = (a - g).div_theta()
        return TeichExpansion(tuple(digits))

    def frobenius(self, power: int = 1) -> "RingElement":
        return RingElement(self.spec, self.spec.frobenius_c(self.c, power))

    def trace(self) -> "RingElement":
        return RingElement(self.spec, self.spec.trace_c(self.c))

    def residue(self) -> "RingElement":
        return RingElement(self.spec.residue_field, self.spec.residue_c(self.c))

    def is_base(self) -> bool:
        """True when the element lies in the base ring R."""
        return self.spec.is_base_c(self.c)

    def multiplicative_order(self) -> int:
        """Order of a unit in S^x (brute force over divisors of |S^x|)."""
        if not self.is_unit():
            raise NotUnitError("order of a non-unit")
        order = self.spec.unit_group_order
        for r in prime_factors(order):
            while order % r == 0 and self ** (order // r) == self.spec.one:
                order //= r
        return order
