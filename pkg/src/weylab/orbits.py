"""Tame automorphisms of the Weyl algebra and orbit-exclusion certificates."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .algebra import EXACT, Poly
from .parsing import parse_poly
from .weyl import WeylOp, apply_homomorphism, commutator


class NotSymplectic(ValueError):
    pass


class PreconditionUnmet(ValueError):
    pass


@dataclass(frozen=True)
class G1:
    """``x -> a x + b D``, ``D -> c x + d D`` with ``a d - b c = 1``."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.a * self.d - self.b * self.c != 1:
            raise NotSymplectic(f"ad - bc = {self.a * self.d - self.b * self.c}")

    def images(self) -> tuple[WeylOp, WeylOp]:
        x, D = WeylOp.x(), WeylOp.d()
        return x.scale(self.a) + D.scale(self.b), x.scale(self.c) + D.scale(self.d)

    def format(self) -> str:
        return "phi1:" + ",".join(_qstr(v) for v in (self.a, self.b, self.c, self.d))


@dataclass(frozen=True)
class G2:
    """``x -> x + P(D)``."""

    P: Poly

    def images(self) -> tuple[WeylOp, WeylOp]:
        return WeylOp.x() + WeylOp.from_d_poly(self.P), WeylOp.d()

    def format(self) -> str:
        return "phi2:" + self.P.format("D")


@dataclass(frozen=True)
class G3:
    """``D -> D + P(x)``."""

    P: Poly

    def images(self) -> tuple[WeylOp, WeylOp]:
        return WeylOp.x(), WeylOp.d() + WeylOp.from_poly(self.P)

    def format(self) -> str:
        return "phi3:" + self.P.format("x")


Generator = Union[G1, G2, G3]


def _qstr(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class AutWord:
    """Generators applied left to right: ``[g1, g2]`` acts as ``g2(g1(.))``."""

    gens: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))

    def format(self) -> str:
        return "; ".join(g.format() for g in self.gens)

    @classmethod
    def parse(cls, text: str) -> "AutWord":
        gens = []
        for part in filter(None, (p.strip() for p in text.split(";"))):
            head, _, body = part.partition(":")
            head = head.strip()
            if head == "phi1":
                vals = [Fraction(v.strip()) for v in body.split(",")]
                if len(vals) != 4:
                    raise ValueError("phi1 takes four scalars")
                gens.append(G1(*vals))
            elif head == "phi2":
                gens.append(G2(parse_poly(body, "D")))
            elif head == "phi3":
                gens.append(G3(parse_poly(body, "x")))
            else:
                raise ValueError(f"unknown generator {head!r}")
        return cls(tuple(gens))

    def __str__(self) -> str:
        return self.format()


def images_of_word(w: AutWord) -> tuple[WeylOp, WeylOp]:
    X, D = WeylOp.x(), WeylOp.d()
    for g in w.gens:
        im = g.images()
        X = apply_homomorphism(im, X, check=False)
        D = apply_homomorphism(im, D, check=False)
    return X, D


def verify_endomorphism(X: WeylOp, D: WeylOp) -> bool:
    """``[D, X] = 1``."""
    return commutator(D, X) == WeylOp.one(X.backend)


def apply_aut(w: AutWord, L: WeylOp) -> WeylOp:
    return apply_homomorphism(images_of_word(w), L)


def image_orders(w: AutWord) -> tuple[int, int]:
    """``(n, m)``: orders of the images of x and D."""
    X, D = images_of_word(w)
    return X.order, D.order


def _rand_q(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def _rand_poly(rng: random.Random, max_deg: int, bound: int) -> Poly:
    deg = rng.randint(0, max_deg)
    return Poly([_rand_q(rng, bound) for _ in range(deg + 1)], EXACT)


def random_generator(rng: random.Random, max_deg: int = 4, max_scalar: int = 10) -> Generator:
    kind = rng.randrange(3)
    if kind == 0:
        while True:
            a, b, c = (_rand_q(rng, max_scalar) for _ in range(3))
            if a == 0:
                continue
            d = (1 + b * c) / a
            if abs(d.numerator) <= max_scalar and d.denominator <= max_scalar:
                return G1(a, b, c, d)
    P = _rand_poly(rng, max_deg, max_scalar)
    return G2(P) if kind == 1 else G3(P)


def bernstein_degree(L: WeylOp) -> int:
    """Largest ``i + j`` over the terms ``x^i D^j`` of L (-1 for zero)."""
    return max((i + j for i, j, _ in L.terms()), default=-1)


def random_word(rng: random.Random, max_gens: int = 6, max_deg: int = 4,
                max_scalar: int = 10, max_image_degree: int | None = None,
                tries: int = 20) -> AutWord:
    """Random bounded word of at most ``max_gens`` generators.

    With ``max_image_degree`` set the word grows one generator at a time and a
    generator that would push the images of x or D past that Bernstein degree
    is redrawn (up to ``tries`` times, after which the word stops growing).
    """
    length = rng.randint(0, max_gens)
    if max_image_degree is None:
        return AutWord(tuple(random_generator(rng, max_deg, max_scalar) for _ in range(length)))
    gens: list = []
    X, D = WeylOp.x(), WeylOp.d()
    for _ in range(length):
        for _ in range(tries):
            g = random_generator(rng, max_deg, max_scalar)
            if isinstance(g, (G2, G3)) and g.P.degree > max_image_degree:
                continue
            im = g.images()
            X1 = apply_homomorphism(im, X, check=False)
            D1 = apply_homomorphism(im, D, check=False)
            if max(bernstein_degree(X1), bernstein_degree(D1)) <= max_image_degree:
                gens.append(g)
                X, D = X1, D1
                break
        else:
            break
    return AutWord(tuple(gens))


# -- orbit exclusion -------------------------------------------------------

@dataclass(frozen=True)
class OrbitQuery:
    dega: int
    r: int
    r1: int
    n: int
    m: int

    def __post_init__(self):
        if self.dega < 0 or self.r < 1 or self.n < 0 or self.m < 0:
            raise ValueError("need dega >= 0, r >= 1, n >= 0, m >= 0")


@dataclass(frozen=True)
class Certificate:
    """Why no automorphism with image orders ``(n, m)`` maps L(r) to L(r1).

    ``branch`` is ``"i"`` (n = 0, affine), ``"ii"`` (order identity
    ``n*dega + 2m = r*n`` fails) or ``"iii"`` (identity holds, and the order
    bound ``3n + 1 >= 2n*dega + m`` is violated).  ``lhs`` and ``rhs`` are the
    two sides of the instantiated relation.
    """

    query: OrbitQuery
    branch: str
    relation: str
    lhs: int
    rhs: int

    def check(self) -> bool:
        q = self.query
        if self.branch == "i":
            return q.n == 0
        if self.branch == "ii":
            return q.n >= 1 and self.lhs == q.n * q.dega + 2 * q.m and self.rhs == q.r * q.n \
                and self.lhs != self.rhs
        if self.branch == "iii":
            return (q.n >= 1 and q.n * q.dega + 2 * q.m == q.r * q.n
                    and self.lhs == 3 * q.n + 1 and self.rhs == 2 * q.n * q.dega + q.m
                    and 2 * self.rhs == q.n * (q.r + 3 * q.dega) and self.lhs < self.rhs)
        return False

    def to_dict(self) -> dict:
        q = self.query
        return {"dega": q.dega, "r": q.r, "r1": q.r1, "n": q.n, "m": q.m,
                "branch": self.branch, "relation": self.relation,
                "lhs": self.lhs, "rhs": self.rhs}


def orbit_excludes(q: OrbitQuery) -> Certificate:
    if q.r <= q.dega + 8:
        raise PreconditionUnmet(f"r = {q.r} <= dega + 8 = {q.dega + 8}")
    if q.r == q.r1:
        raise PreconditionUnmet("r == r1")
    if q.n == 0:
        # only m = 1 keeps the order at four; the triangular shape then forces
        # x -> s1 x + s2, D -> s3 D + s4, which keeps deg c_r = r
        note = "affine: x -> s1*x + s2, D -> s3*D + s4" if q.m == 1 else \
            f"n = 0 with m = {q.m} != 1 raises the order above four"
        return Certificate(q, "i", note, q.n, 0)
    lhs, rhs = q.n * q.dega + 2 * q.m, q.r * q.n
    if lhs != rhs:
        return Certificate(q, "ii", f"n*dega + 2m = {lhs} != r*n = {rhs}", lhs, rhs)
    lo, hi = 3 * q.n + 1, 2 * q.n * q.dega + q.m
    cert = Certificate(q, "iii", f"3n + 1 = {lo} < 2n*dega + m = {hi}", lo, hi)
    if not cert.check():
        raise AssertionError(f"order bound does not exclude {q}")
    return cert


# -- shape matching --------------------------------------------------------

def match_L4_shape(L: WeylOp) -> tuple[Poly, Poly] | None:
    """``(V, W)`` if ``L = (D^2 + V)^2 + W`` exactly, else None."""
    if L.order != 4 or L[4] != Poly([1], L.backend) or not L[3].is_zero():
        return None
    V = L[2].scale(Fraction(1, 2))
    if L[1] != V.derive().scale(2):
        return None
    W = L[0] - V.derive(2) - V * V
    return V, W


def is_family_shape(L: WeylOp, m: int) -> bool:
    """``L = (D^2 + V)^2 + W`` with ``deg W = m`` and ``deg V = m + 2``."""
    vw = match_L4_shape(L)
    return vw is not None and vw[1].degree == m and vw[0].degree == m + 2
