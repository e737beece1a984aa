"""Integer certificates behind the degree bookkeeping.

Everything here is exact arbitrary-precision arithmetic: prime-power
detection, binomial coefficients, the gcd of C(r,1), ..., C(r,r-1), and
Bezout-style certificates writing -1 as an integer combination of those
binomials.  Such a certificate exists exactly when r is not a prime
power (the gcd is 1 then), and it linearizes into an ordered plan of
signed steps whose running total starts at 1 and ends at the target 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

__all__ = [
    "CertificateImpossibleError",
    "BezoutCertificate",
    "ModificationPlan",
    "is_prime_power",
    "binomial",
    "binomial_gcd",
    "bezout_certificate",
    "certificate_to_plan",
]


class CertificateImpossibleError(ValueError):
    """Raised when no certificate exists: the binomial gcd exceeds 1."""

    def __init__(self, r: int, obstruction_gcd: int):
        self.r = r
        self.obstruction_gcd = obstruction_gcd
        super().__init__(
            f"no certificate for r={r}: gcd of C({r},1..{r - 1}) is "
            f"{obstruction_gcd}, so -1 is not an integer combination"
        )


def is_prime_power(r: int) -> Optional[tuple[int, int]]:
    """Return (p, m) with r = p**m and p prime, or None.

    Plain trial factorization; inputs are small enough that nothing
    cleverer is warranted.
    """
    if r < 2:
        raise ValueError(f"prime-power test needs r >= 2, got {r}")
    d = 2
    while d * d <= r:
        if r % d == 0:
            m, n = 0, r
            while n % d == 0:
                n //= d
                m += 1
            return (d, m) if n == 1 else None
        d += 1
    return (r, 1)


def binomial(n: int, k: int) -> int:
    """Exact C(n, k); raises on out-of-range arguments."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"binomial needs 0 <= k <= n, got n={n}, k={k}")
    return math.comb(n, k)


def binomial_gcd(r: int) -> int:
    """gcd of C(r,k) for k = 1..r-1 (1 for r not a prime power, else p)."""
    if r < 2:
        raise ValueError(f"binomial_gcd needs r >= 2, got {r}")
    g = 0
    # C(r,k) = C(r,r-k), so half the row determines the gcd
    for k in range(1, r // 2 + 1):
        g = math.gcd(g, math.comb(r, k))
        if g == 1:
            return 1
    return g


@dataclass(frozen=True)
class BezoutCertificate:
    """Integer weights a_1..a_{r-1} intended to satisfy sum a_k*C(r,k) = -1.

    Structural validity (length, integrality) is enforced here; the
    checksum itself is checked by :meth:`verify`, so demonstration
    objects with other checksums can still be turned into plans.
    """

    r: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.r < 2:
            raise ValueError(f"certificate needs r >= 2, got {self.r}")
        coeffs = tuple(int(a) for a in self.coeffs)
        if len(coeffs) != self.r - 1:
            raise ValueError(
                f"certificate for r={self.r} needs {self.r - 1} coefficients, "
                f"got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def checksum(self) -> int:
        return sum(a * math.comb(self.r, k) for k, a in enumerate(self.coeffs, 1))

    @property
    def is_valid(self) -> bool:
        return self.checksum == -1

    def verify(self) -> None:
        if not self.is_valid:
            raise ValueError(f"certificate checksum is {self.checksum}, not -1")

    def to_json(self) -> dict:
        return {"r": self.r, "coeffs": [str(a) for a in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "BezoutCertificate":
        return cls(int(obj["r"]), tuple(int(s) for s in obj["coeffs"]))


@dataclass(frozen=True)
class ModificationPlan:
    """Ordered signed steps (k, +-1); the running degree starts at 1.

    The declared target must equal 1 + sum sign*C(r,k); certificate
    plans target 0.
    """

    r: int
    steps: tuple[tuple[int, int], ...]
    target: int

    def __post_init__(self):
        if self.r < 2:
            raise ValueError(f"plan needs r >= 2, got {self.r}")
        steps = tuple((int(k), int(s)) for k, s in self.steps)
        for k, s in steps:
            if not 1 <= k <= self.r - 1:
                raise ValueError(f"plan step k={k} outside [1, {self.r - 1}]")
            if s not in (-1, 1):
                raise ValueError(f"plan step sign must be +-1, got {s}")
        object.__setattr__(self, "steps", steps)
        declared = 1 + sum(s * math.comb(self.r, k) for k, s in steps)
        if declared != self.target:
            raise ValueError(
                f"plan target {self.target} disagrees with computed {declared}"
            )

    @classmethod
    def from_steps(cls, r: int, steps: Sequence[tuple[int, int]]) -> "ModificationPlan":
        steps = tuple((int(k), int(s)) for k, s in steps)
        target = 1 + sum(s * math.comb(r, k) for k, s in steps)
        return cls(r, steps, target)

    @property
    def deltas(self) -> tuple[int, ...]:
        return tuple(s * math.comb(self.r, k) for k, s in self.steps)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "steps": [{"k": k, "sign": s} for k, s in self.steps],
            "target": self.target,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ModificationPlan":
        steps = tuple((int(st["k"]), int(st["sign"])) for st in obj["steps"])
        return cls.from_steps(int(obj["r"]), steps)


def certificate_to_plan(cert: BezoutCertificate, max_steps: int = 100000) -> ModificationPlan:
    """Linearize a certificate: |a_k| steps of sign(a_k) for each k.

    The target comes out as 1 + checksum, i.e. 0 for valid certificates
    and whatever the arithmetic says for demonstration coefficient sets.
    Fallback certificates can carry coefficients far too large to spell
    out as steps; those are rejected against max_steps.
    """
    total = sum(abs(a) for a in cert.coeffs)
    if total > max_steps:
        raise ValueError(
            f"certificate needs {total} steps, beyond the max_steps={max_steps} "
            "cap; it is still valid as a checksum"
        )
    steps: list[tuple[int, int]] = []
    for k, a in enumerate(cert.coeffs, 1):
        if a:
            steps.extend((k, 1 if a > 0 else -1) for _ in range(abs(a)))
    return ModificationPlan.from_steps(cert.r, steps)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        return -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _small_certificate(r: int) -> Optional[tuple[int, ...]]:
    """Search coefficient vectors with sum |a_k| <= 3, lexicographically least.

    Sum 1 is impossible (every binomial exceeds 1) and a doubled weight
    cannot reach the odd target -1 at sum 2, so the search reduces to
    unit pairs, unit triples, and (2,1) patterns; each is resolved with
    a value table in at most O(r^2) probes.
    """
    b = [math.comb(r, k) for k in range(r)]
    m = r - 1
    locs: dict[int, list[int]] = {}
    for k in range(1, r):
        locs.setdefault(b[k], []).append(k)

    def vec(pairs):
        v = [0] * m
        for k, a in pairs:
            v[k - 1] += a
        return tuple(v)

    sols: list[tuple[int, ...]] = []
    for k1 in range(1, r):
        for s1 in (-1, 1):
            rem = -1 - s1 * b[k1]
            if rem == 0:
                continue
            for k2 in locs.get(abs(rem), ()):
                if k2 > k1:
                    sols.append(vec([(k1, s1), (k2, 1 if rem > 0 else -1)]))
    if sols:
        return min(sols)

    for k1 in range(1, r):
        for k2 in range(k1 + 1, r):
            for s1 in (-1, 1):
                for s2 in (-1, 1):
                    rem = -1 - s1 * b[k1] - s2 * b[k2]
                    if rem == 0:
                        continue
                    for k3 in locs.get(abs(rem), ()):
                        if k3 > k2:
                            sols.append(
                                vec([(k1, s1), (k2, s2), (k3, 1 if rem > 0 else -1)])
                            )
    for ka in range(1, r):
        for sa in (-1, 1):
            rem = -1 - 2 * sa * b[ka]
            if rem == 0:
                continue
            for kb in locs.get(abs(rem), ()):
                if kb != ka:
                    sols.append(vec([(ka, 2 * sa), (kb, 1 if rem > 0 else -1)]))
    if sols:
        return min(sols)
    return None


def _euclid_certificate(r: int) -> tuple[int, ...]:
    """Iterated extended Euclid over C(r,1), C(r,2), ... accumulating weights.

    Intermediate weights are reduced to symmetric residues to keep the
    output from exploding; no minimality is claimed.
    """
    b = [math.comb(r, k) for k in range(r)]
    coeffs = [0] * (r - 1)
    g = b[1]
    coeffs[0] = 1
    for k in range(2, r):
        if g == 1:
            break
        g2, x, y = _ext_gcd(g, b[k])
        mod = b[k] // g2
        if mod > 1:
            t = x % mod
            if t > mod // 2:
                t -= mod
            y += ((x - t) // mod) * (g // g2)
            x = t
        coeffs = [x * c for c in coeffs]
        coeffs[k - 1] += y
        g = g2
    if g != 1:
        raise AssertionError(f"gcd chain for r={r} never reached 1")
    return tuple(-c for c in coeffs)


def bezout_certificate(r: int) -> BezoutCertificate:
    """A certificate with checksum -1, or CertificateImpossibleError.

    Prefers short certificates (sum |a_k| <= 3, found for r = 6 among
    others); falls back to the extended-Euclid chain, which always
    succeeds when the binomial gcd is 1.
    """
    if r < 2:
        raise ValueError(f"bezout_certificate needs r >= 2, got {r}")
    g = binomial_gcd(r)
    if g != 1:
        raise CertificateImpossibleError(r, g)
    coeffs = _small_certificate(r)
    if coeffs is None:
        coeffs = _euclid_certificate(r)
    cert = BezoutCertificate(r, tuple(coeffs))
    cert.verify()
    return cert
