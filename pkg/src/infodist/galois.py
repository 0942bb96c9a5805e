"""GF(p^n) arithmetic and mutually unbiased bases for odd prime powers.

Field elements are coefficient vectors over a fixed monic irreducible
modulus (constant term first). The element enumeration is lexicographic
with the constant coefficient varying fastest, i.e. element ``m`` has the
base-p digits of ``m`` as coefficients. The unbiased-bases matrix layout
depends on this order, so it is part of the interface.

In dimension d = p^n (p an odd prime) the d+1 unbiased bases supply
d(d+1) states whose uniform average reproduces every Haar average of a
degree-two polynomial in |psi><psi|: a complex projective 2-design.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimMismatchError, EvenPrimeError
from .disturbance import pi_operator


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


# -- polynomial helpers over Z_p, coefficients low to high ------------------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_modred(prod, modulus, p)


def _poly_modred(a: list[int], modulus: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    n = len(modulus) - 1
    for k in range(len(a) - 1, n - 1, -1):
        c = a[k]
        if c:
            a[k] = 0
            for i in range(n):
                a[k - n + i] = (a[k - n + i] - c * modulus[i]) % p
    return _poly_trim(a[:])


def _poly_powmod(a: list[int], e: int, modulus: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_modred(a[:], modulus, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, modulus, p)
        base = _poly_mulmod(base, base, modulus, p)
        e >>= 1
    return result


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _poly_trim([c % p for c in a])
    b = _poly_trim([c % p for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    quot = [0] * max(0, len(a) - len(b) + 1)
    rem = a[:]
    while len(rem) >= len(b):
        c = (rem[-1] * inv_lead) % p
        shift = len(rem) - len(b)
        quot[shift] = c
        for i, bi in enumerate(b):
            rem[shift + i] = (rem[shift + i] - c * bi) % p
        rem = _poly_trim(rem)
    return _poly_trim(quot), rem


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(a[:]), _poly_trim(b[:])
    while b:
        _, r = _poly_divmod(a, b, p)
        a, b = b, r
    if a:
        inv_lead = pow(a[-1], -1, p)
        a = [(c * inv_lead) % p for c in a]
    return a


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    length = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(length)]
    return _poly_trim(out)


def is_irreducible(modulus: list[int], p: int) -> bool:
    """Rabin test: x^(p^n) = x mod f, and x^(p^(n/q)) - x coprime to f for
    every prime divisor q of n."""
    n = len(modulus) - 1
    if n < 1 or modulus[-1] % p != 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**n, modulus, p), x, p):
        return False
    for q in _prime_divisors(n):
        delta = _poly_sub(_poly_powmod(x, p ** (n // q), modulus, p), x, p)
        if len(_poly_gcd(delta, list(modulus), p)) != 1:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


# -- field types -------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^n) presented by a monic irreducible modulus (constant first)."""

    p: int
    n: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if self.p == 2:
            raise EvenPrimeError("characteristic two is not supported")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if len(self.modulus) != self.n + 1 or self.modulus[-1] % self.p != 1:
            raise ValueError("modulus must be monic of degree n")
        object.__setattr__(self, "modulus", tuple(c % self.p for c in self.modulus))
        if not is_irreducible(list(self.modulus), self.p):
            raise ValueError(f"modulus {self.modulus} is reducible over F_{self.p}")

    @property
    def order(self) -> int:
        return self.p**self.n

    def element(self, value) -> "FieldElement":
        """Element from an integer index (base-p digits, constant fastest)
        or from an explicit coefficient sequence."""
        if isinstance(value, (int, np.integer)):
            m = int(value) % self.order
            coeffs = []
            for _ in range(self.n):
                coeffs.append(m % self.p)
                m //= self.p
            return FieldElement(self, tuple(coeffs))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.n:
            raise ValueError(f"too many coefficients for degree {self.n}")
        coeffs += [0] * (self.n - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def elements(self) -> list["FieldElement"]:
        return [self.element(m) for m in range(self.order)]


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    coeffs: tuple[int, ...]

    def _check(self, other: "FieldElement") -> None:
        if self.spec != other.spec:
            raise DimMismatchError("elements belong to different fields")

    def __add__(self, other):
        self._check(other)
        p = self.spec.p
        return FieldElement(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        p = self.spec.p
        return FieldElement(self.spec, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        p = self.spec.p
        return FieldElement(self.spec, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        prod = _poly_mulmod(list(self.coeffs), list(other.coeffs), list(self.spec.modulus), self.spec.p)
        return self.spec.element(prod)

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = _poly_powmod(list(self.coeffs), e, list(self.spec.modulus), self.spec.p)
        return self.spec.element(out)

    def inv(self) -> "FieldElement":
        """Multiplicative inverse by the extended Euclidean algorithm."""
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative inverse")
        p = self.spec.p
        modulus = list(self.spec.modulus)
        r0, r1 = modulus, _poly_trim(list(self.coeffs))
        s0, s1 = [0], [1]
        while r1:
            q, r = _poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            # s0 - q * s1
            qs = [0] * (len(q) + len(s1) - 1) if q and s1 else []
            for i, qi in enumerate(q):
                for j, sj in enumerate(s1):
                    qs[i + j] = (qs[i + j] + qi * sj) % p
            length = max(len(s0), len(qs))
            s_next = [((s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)) % p for i in range(length)]
            s0, s1 = s1, _poly_trim(s_next)
        inv_lead = pow(r0[-1], -1, p)
        result = _poly_modred([(c * inv_lead) % p for c in s0], modulus, p)
        return self.spec.element(result)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def index(self) -> int:
        """Position in the lexicographic enumeration."""
        return sum(c * self.spec.p**i for i, c in enumerate(self.coeffs))


def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def field_neg(a: FieldElement) -> FieldElement:
    return -a


def field_inv(a: FieldElement) -> FieldElement:
    return a.inv()


def find_irreducible(p: int, n: int) -> FieldSpec:
    """First monic degree-n irreducible in lexicographic coefficient order
    (constant coefficient varying fastest). Deterministic."""
    if p == 2:
        raise EvenPrimeError("characteristic two is not supported")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    for m in range(p**n):
        coeffs = []
        mm = m
        for _ in range(n):
            coeffs.append(mm % p)
            mm //= p
        candidate = coeffs + [1]
        if is_irreducible(candidate, p):
            return FieldSpec(p, n, tuple(candidate))
    raise RuntimeError("unreachable: an irreducible polynomial always exists")


def field_trace(x: FieldElement) -> int:
    """Tr(x) = x + x^p + ... + x^(p^(n-1)), landing in the prime subfield."""
    spec = x.spec
    acc = x
    power = x
    for _ in range(spec.n - 1):
        power = power**spec.p
        acc = acc + power
    if any(c != 0 for c in acc.coeffs[1:]):
        raise RuntimeError(f"trace left the prime subfield (bad modulus?): {acc.coeffs}")
    return acc.coeffs[0]


# -- mutually unbiased bases -------------------------------------------------


@dataclass(frozen=True)
class MubSet:
    """d+1 orthonormal bases with all cross-basis overlaps of modulus
    1/sqrt(d). Basis index d is the standard basis; columns are vectors."""

    d: int
    bases: tuple[np.ndarray, ...]

    def vectors(self) -> np.ndarray:
        """All d(d+1) basis vectors stacked as rows."""
        return np.concatenate([b.T for b in self.bases], axis=0)


@lru_cache(maxsize=8)
def _trace_tables(p: int, n: int) -> tuple[FieldSpec, np.ndarray, np.ndarray]:
    """Integer tables S[k,l] = Tr(k l^2) and T[j,l] = Tr(j l)."""
    spec = find_irreducible(p, n)
    els = spec.elements()
    d = spec.order
    # trace is F_p-linear; cache it on the monomial basis
    mono = [field_trace(spec.element([0] * i + [1])) for i in range(n)]

    def tr_of(e: FieldElement) -> int:
        return sum(c * t for c, t in zip(e.coeffs, mono)) % p

    squares = [e * e for e in els]
    s_table = np.zeros((d, d), dtype=np.int64)
    t_table = np.zeros((d, d), dtype=np.int64)
    for a in range(d):
        for b in range(d):
            s_table[a, b] = tr_of(els[a] * squares[b])
            t_table[a, b] = tr_of(els[a] * els[b])
    return spec, s_table, t_table


def wootters_fields_mub(p: int, n: int, cap: int = 49) -> MubSet:
    """The d+1 mutually unbiased bases in dimension d = p^n, p an odd prime.

    In the standard basis, vector j of basis k has l-th component
    omega^(Tr[k l^2 + j l]) / sqrt(d) with omega = exp(2 pi i / p).
    """
    if p == 2:
        raise EvenPrimeError("even prime unsupported: the construction needs odd characteristic")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    d = p**n
    if d > cap:
        raise ValueError(f"dimension {d} exceeds the configured cap {cap}")
    _, s_table, t_table = _trace_tables(p, n)
    # roots of unity from exact angles, exponents reduced mod p first
    omega = np.exp(2j * np.pi * np.arange(p) / p)
    bases = []
    for k in range(d):
        exponents = (s_table[k][:, None] + t_table.T) % p
        bases.append(omega[exponents] / np.sqrt(d))
    bases.append(np.eye(d, dtype=complex))
    return MubSet(d, tuple(bases))


def mub_validate(mub: MubSet) -> tuple[float, float]:
    """(max unitarity residual, max deviation of cross overlaps from 1/sqrt d)."""
    unit = 0.0
    overlap = 0.0
    root = 1.0 / np.sqrt(mub.d)
    eye = np.eye(mub.d)
    for i, b in enumerate(mub.bases):
        unit = max(unit, float(np.abs(b.conj().T @ b - eye).max()))
        for c in mub.bases[i + 1 :]:
            overlap = max(overlap, float(np.abs(np.abs(b.conj().T @ c) - root).max()))
    return unit, overlap


def design_operator(vectors: np.ndarray) -> np.ndarray:
    """Average of |v x v><v x v| over a list of unit vectors (rows).

    For the full set of unbiased-bases vectors this equals the Haar second
    moment ``pi_operator(d).matrix`` exactly: the set is a 2-design.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if vectors.shape[0] == 0:
        raise DimMismatchError("need at least one vector")
    w = np.einsum("ma,mb->mab", vectors, vectors).reshape(vectors.shape[0], -1)
    return (w.T @ w.conj()) / vectors.shape[0]


def design_check(vectors: np.ndarray, trials: int, rng: np.random.Generator) -> float:
    """Max deviation of the discrete average of tr(pi A) tr(pi B) from the
    Haar value, over random operator pairs. Near zero iff the vectors form
    a projective 2-design."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=complex))
    d = vectors.shape[1]
    worst = 0.0
    for _ in range(trials):
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        va = np.einsum("md,de,me->m", vectors.conj(), a, vectors)
        vb = np.einsum("md,de,me->m", vectors.conj(), b, vectors)
        discrete = np.mean(va * vb)
        exact = (np.trace(a) * np.trace(b) + np.trace(a @ b)) / (d * (d + 1))
        worst = max(worst, float(abs(discrete - exact)))
    return worst


def mub_design_residual(mub: MubSet) -> float:
    """Max-entry distance between the design operator of the unbiased-bases
    vectors and the exact Haar second moment."""
    return float(np.abs(design_operator(mub.vectors()) - pi_operator(mub.d).matrix).max())
