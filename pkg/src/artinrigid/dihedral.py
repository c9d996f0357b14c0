"""Garside normal forms in the dihedral Artin group <a, b | <ab>_m = <ba>_m>.

Every element is uniquely Delta^k * T with Delta = <ab>_m and T a positive
word that is not left-divisible by Delta.  A positive word with no Delta
factor admits no braid move at all, so such a tail is a single word and is
automatically the shortlex-least word of its class.

``nf`` works letter by letter and keeps the tail Delta-free.  Appending a
positive letter can only create a Delta factor as a suffix, which is then
pulled to the front through the flip sigma (x Delta = Delta sigma(x)).  An
inverse letter g^-1 is Delta^-1 times Delta with its last g removed.
``nf_by_closure`` is the slower reference that works on whole braid-move
closures and is kept as the test oracle for ``nf``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Set, Tuple, Union

from .errors import BudgetError, PreconditionError

CLOSURE_BUDGET = 10**6
BALL_RADIUS_CAP = 8

Letter = Tuple[str, int]
SignedWord2 = List[Letter]
WordLike = Union[str, Sequence[Letter]]


def alternating(first: str, length: int) -> str:
    other = "b" if first == "a" else "a"
    return "".join(first if i % 2 == 0 else other for i in range(length))


def delta_spellings(m: int) -> Tuple[str, str]:
    return alternating("a", m), alternating("b", m)


def sigma(word: str, m: int, times: int = 1) -> str:
    """The conjugation x -> Delta x Delta^-1 on positive words (swap a, b when m is odd)."""
    if m % 2 == 0 or times % 2 == 0:
        return word
    return word.translate(str.maketrans("ab", "ba"))


def delta_without_last(g: str, m: int) -> str:
    """Delta spelled to end in g, with that final g removed."""
    first = g if m % 2 == 1 else ("b" if g == "a" else "a")
    return alternating(first, m)[:-1]


_TOKEN = re.compile(r"([abAB])(\^-1|⁻¹)?")


def parse_word(text: WordLike) -> SignedWord2:
    """Read ``abAB`` syntax (A = a^-1, B = b^-1); ``a^-1`` and ``a⁻¹`` are accepted too."""
    if not isinstance(text, str):
        return [(g, int(s)) for g, s in text]
    out: SignedWord2 = []
    pos = 0
    s = "".join(text.split())
    while pos < len(s):
        mt = _TOKEN.match(s, pos)
        if not mt:
            raise ValueError(f"cannot read letter at {s[pos:]!r}")
        ch, inv = mt.groups()
        sign = -1 if ch.isupper() else 1
        if inv:
            sign = -sign
        out.append((ch.lower(), sign))
        pos = mt.end()
    return out


def word_to_text(w: Sequence[Letter]) -> str:
    return "".join(g if s > 0 else g.upper() for g, s in w)


def inverse_word(w: Sequence[Letter]) -> SignedWord2:
    return [(g, -s) for g, s in reversed(w)]


@dataclass(frozen=True, order=True)
class DihedralElement:
    m: int
    k: int
    tail: str

    def __str__(self) -> str:
        return f"D^{self.k} * {self.tail or '1'}"

    def word(self) -> SignedWord2:
        """A signed word representing the element."""
        d = alternating("a", self.m)
        if self.k >= 0:
            body = [(g, 1) for g in d * self.k]
        else:
            body = inverse_word([(g, 1) for g in d * (-self.k)])
        return body + [(g, 1) for g in self.tail]


def identity(m: int) -> DihedralElement:
    return DihedralElement(m, 0, "")


def _check_m(m: int) -> None:
    if m < 2:
        raise PreconditionError(f"label {m} < 2")


# ---------------------------------------------------------------- closures


def positive_closure(w: str, m: int, budget: int = CLOSURE_BUDGET) -> Set[str]:
    """All positive words reachable from w by braid moves."""
    _check_m(m)
    d1, d2 = delta_spellings(m)
    swap = {d1: d2, d2: d1}
    seen = {w}
    queue = deque([w])
    while queue:
        u = queue.popleft()
        for i in range(len(u) - m + 1):
            piece = u[i : i + m]
            if piece in swap:
                v = u[:i] + swap[piece] + u[i + m :]
                if v not in seen:
                    seen.add(v)
                    if len(seen) > budget:
                        raise BudgetError(f"closure of {w!r} exceeds {budget} words")
                    queue.append(v)
    return seen


def shortlex_key(w: str) -> Tuple[int, str]:
    return len(w), w


def nf_by_closure(word: WordLike, m: int, budget: int = CLOSURE_BUDGET) -> DihedralElement:
    """Reference normal form built from whole braid-move closures."""
    _check_m(m)
    k = 0
    p = ""
    for g, s in parse_word(word):
        if s > 0:
            p += g
        else:
            p = sigma(p, m) + delta_without_last(g, m)
            k -= 1
    deltas = delta_spellings(m)
    while True:
        cls = positive_closure(p, m, budget)
        hit = min((u for u in cls if u[:m] in deltas), key=shortlex_key, default=None)
        if hit is None:
            return DihedralElement(m, k, min(cls, key=shortlex_key))
        k += 1
        p = hit[m:]


# ---------------------------------------------------------------- fast normal form


def _push(m: int, k: int, tail: str, g: str, deltas: Tuple[str, str]) -> Tuple[int, str]:
    t = tail + g
    if len(t) >= m and t[-m:] in deltas:
        return k + 1, sigma(t[:-m], m)
    return k, t


def _append(m: int, k: int, tail: str, w: Iterable[Letter]) -> Tuple[int, str]:
    deltas = delta_spellings(m)
    for g, s in w:
        if s > 0:
            k, tail = _push(m, k, tail, g, deltas)
        else:
            k, tail = k - 1, sigma(tail, m)
            for h in delta_without_last(g, m):
                k, tail = _push(m, k, tail, h, deltas)
    return k, tail


def nf(word: WordLike, m: int) -> DihedralElement:
    _check_m(m)
    k, tail = _append(m, 0, "", parse_word(word))
    return DihedralElement(m, k, tail)


def _same_m(x: DihedralElement, y: DihedralElement) -> None:
    if x.m != y.m:
        raise PreconditionError(f"labels differ: {x.m} vs {y.m}")


def mult(x: DihedralElement, y: DihedralElement) -> DihedralElement:
    _same_m(x, y)
    m = x.m
    # Delta^k1 T1 Delta^k2 T2 = Delta^(k1+k2) sigma^k2(T1) T2
    k, tail = _append(m, x.k + y.k, sigma(x.tail, m, y.k), [(g, 1) for g in y.tail])
    return DihedralElement(m, k, tail)


def inv(x: DihedralElement) -> DihedralElement:
    t_inv = nf(inverse_word([(g, 1) for g in x.tail]), x.m)
    return mult(t_inv, DihedralElement(x.m, -x.k, ""))


def eq(x: DihedralElement, y: DihedralElement) -> bool:
    return x.m == y.m and x.k == y.k and x.tail == y.tail


def power(x: DihedralElement, n: int) -> DihedralElement:
    base = x if n >= 0 else inv(x)
    out = identity(x.m)
    for _ in range(abs(n)):
        out = mult(out, base)
    return out


def generator(g: str, m: int, exponent: int = 1) -> DihedralElement:
    return nf([(g, 1 if exponent > 0 else -1)] * abs(exponent), m)


def delta(m: int, k: int = 1) -> DihedralElement:
    return DihedralElement(m, k, "")


def center_generator(m: int) -> DihedralElement:
    """Delta^2 for odd m, Delta for even m."""
    if m < 3:
        raise PreconditionError("center_generator needs m >= 3")
    return delta(m, 2 if m % 2 else 1)


def commutes(x: DihedralElement, y: DihedralElement) -> bool:
    return eq(mult(x, y), mult(y, x))


def ball(m: int, radius: int, cap: int = BALL_RADIUS_CAP) -> Set[DihedralElement]:
    """Elements of word length at most ``radius`` in the generators a, b."""
    if radius > cap:
        raise BudgetError(f"radius {radius} exceeds cap {cap}")
    gens = [nf(w, m) for w in ("a", "A", "b", "B")]
    seen = {identity(m)}
    frontier = [identity(m)]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for g in gens:
                y = mult(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def exponent_sum(x: DihedralElement, c: str) -> int:
    """Image of x in the abelianisation, read off as the exponent attached to c."""
    m = x.m
    if m % 2:
        return x.k * m + len(x.tail)
    return x.k * (m // 2) + x.tail.count(c)


def coset_equal_gen(x: DihedralElement, y: DihedralElement, c: str) -> bool:
    """Whether x<c> = y<c>."""
    _same_m(x, y)
    d = mult(inv(x), y)
    t = exponent_sum(d, c)
    if x.m % 2 == 0:
        other = "b" if c == "a" else "a"
        if exponent_sum(d, other) != 0:
            return False
    return eq(d, generator(c, x.m, t) if t else identity(x.m))


def delta_power_coset_check(m: int, K: int, Q: int) -> bool:
    """Delta^k a^q = Delta^k' b^q' forces k = k' and q = q' = 0, over the given box."""
    left = {}
    for k in range(-K, K + 1):
        for q in range(-Q, Q + 1):
            left[(k, q)] = mult(delta(m, k), generator("a", m, q) if q else identity(m))
    for k2 in range(-K, K + 1):
        for q2 in range(-Q, Q + 1):
            rhs = mult(delta(m, k2), generator("b", m, q2) if q2 else identity(m))
            for (k, q), lhs in left.items():
                if eq(lhs, rhs) and not (k == k2 and q == 0 and q2 == 0):
                    return False
    return True


def ball_words(m: int, radius: int, cap: int = BALL_RADIUS_CAP) -> List[Tuple[DihedralElement, SignedWord2]]:
    """Ball elements in discovery order, each with the geodesic word that reached it.

    Order is breadth-first with generator order a, a^-1, b, b^-1, so it is
    deterministic and shortest words come first.
    """
    if radius > cap:
        raise BudgetError(f"radius {radius} exceeds cap {cap}")
    steps = [("a", 1), ("a", -1), ("b", 1), ("b", -1)]
    gens = [nf([st], m) for st in steps]
    start = identity(m)
    out = [(start, [])]
    seen = {start}
    frontier = out[:]
    for _ in range(radius):
        nxt = []
        for x, w in frontier:
            for st, gx in zip(steps, gens):
                y = mult(x, gx)
                if y not in seen:
                    seen.add(y)
                    nxt.append((y, w + [st]))
        out.extend(nxt)
        frontier = nxt
    return out
