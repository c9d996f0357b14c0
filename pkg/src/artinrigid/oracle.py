"""Word-problem services for A_Gamma.

Exact routes: positive words (braid-move closure; the Artin monoid embeds),
rank-2 words (dihedral normal form), tree-shaped Gamma (iterated amalgam
normal form) and large type (geodesic reduction by tau-moves).  Everything
else goes through a bounded bidirectional search that can only ever prove
equality, together with invariants that can only ever prove distinctness:
the abelianisation, the Coxeter quotient and finite linear quotients.
Budgets count distinct visited words, never time.
"""

from __future__ import annotations

import re
from collections import deque
from functools import lru_cache
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from . import dihedral
from .errors import BudgetError, PreconditionError
from .graph_core import DefiningGraph, components, is_connected

Letter = Tuple[str, int]
GroupWord = Tuple[Letter, ...]

CLOSURE_BUDGET = 10**6
SEARCH_BUDGET = 200_000
GEODESIC_RADIUS = 8


@dataclass(frozen=True)
class Equal:
    route: str = ""


@dataclass(frozen=True)
class Distinct:
    certificate: str


@dataclass(frozen=True)
class Unknown:
    visited: int
    budget: int


OracleVerdict = Union[Equal, Distinct, Unknown]


# ---------------------------------------------------------------- words


_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(\^-1|⁻¹)?\Z")


def parse_group_word(text: str) -> GroupWord:
    """Whitespace-separated tokens ``v`` or ``v^-1``."""
    out = []
    for tok in text.split():
        mt = _TOKEN.match(tok)
        if not mt:
            raise ValueError(f"bad token {tok!r}")
        out.append((mt.group(1), -1 if mt.group(2) else 1))
    return tuple(out)


def letters(text: str) -> GroupWord:
    """Compact form for one-character generator names; upper case is the inverse."""
    return tuple((ch.lower(), -1 if ch.isupper() else 1) for ch in text if not ch.isspace())


def word_text(w: Sequence[Letter]) -> str:
    return " ".join(g if s > 0 else f"{g}^-1" for g, s in w) or "1"


def as_word(w) -> GroupWord:
    if isinstance(w, str):
        return parse_group_word(w)
    return tuple((g, int(s)) for g, s in w)


def inverse(w: Sequence[Letter]) -> GroupWord:
    return tuple((g, -s) for g, s in reversed(w))


def positive(word: Iterable[str]) -> GroupWord:
    return tuple((g, 1) for g in word)


def free_reduce(w: Sequence[Letter]) -> GroupWord:
    out: List[Letter] = []
    for g, s in w:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


def cyclic_core(w: Sequence[Letter]) -> GroupWord:
    """Strip x ... x^-1 from both ends of a freely reduced word."""
    w = tuple(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i][0] == w[j - 1][0] and w[i][1] == -w[j - 1][1]:
        i += 1
        j -= 1
    return w[i:j]


def is_positive(w: Sequence[Letter]) -> bool:
    return all(s > 0 for _, s in w)


# ---------------------------------------------------------------- abelianisation


@lru_cache(maxsize=64)
def odd_classes(g: DefiningGraph) -> Dict[str, str]:
    """Map each vertex to the first vertex of its odd-label component (shared; do not mutate)."""
    odd_adj = {v: set() for v in g.vertices}
    for a, b, m in g.edges():
        if m % 2:
            odd_adj[a].add(b)
            odd_adj[b].add(a)
    rep = {}
    for comp in components(odd_adj):
        first = min(comp, key=g.vertices.index)
        for v in comp:
            rep[v] = first
    return rep


def abelianization(w: Sequence[Letter], g: DefiningGraph) -> Dict[str, int]:
    rep = odd_classes(g)
    vec = {r: 0 for r in dict.fromkeys(rep[v] for v in g.vertices)}
    for x, s in w:
        vec[rep[x]] += s
    return vec


# ---------------------------------------------------------------- braid moves


def _edge_moves(g: DefiningGraph) -> Dict[Tuple[str, ...], List[Tuple[str, ...]]]:
    moves: Dict[Tuple[str, ...], List[Tuple[str, ...]]] = {}
    for a, b, m in g.edges():
        u = tuple(dihedral.alternating("a", m).translate(str.maketrans("ab", "\0\1")))
        p = tuple(a if ch == "\0" else b for ch in u)
        q = tuple(b if x == a else a for x in p)
        moves.setdefault(p, []).append(q)
        moves.setdefault(q, []).append(p)
    return moves


def _braid_neighbours(u: Tuple[str, ...], moves, lengths: Sequence[int]):
    for L in lengths:
        for i in range(len(u) - L + 1):
            piece = u[i : i + L]
            for rep in moves.get(piece, ()):
                yield u[:i] + rep + u[i + L :]


def positive_closure(w: Sequence[str], g: DefiningGraph, budget: int = CLOSURE_BUDGET) -> Set[Tuple[str, ...]]:
    moves = _edge_moves(g)
    lengths = sorted({len(p) for p in moves})
    start = tuple(w)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in _braid_neighbours(u, moves, lengths):
            if v not in seen:
                seen.add(v)
                if len(seen) > budget:
                    raise BudgetError(f"positive closure exceeds {budget} words")
                queue.append(v)
    return seen


def positive_equal(w1, w2, g: DefiningGraph, budget: int = CLOSURE_BUDGET) -> bool:
    w1, w2 = as_word(w1), as_word(w2)
    if not (is_positive(w1) and is_positive(w2)):
        raise PreconditionError("positive_equal needs positive words")
    a = tuple(x for x, _ in w1)
    b = tuple(x for x, _ in w2)
    if len(a) != len(b) or abelianization(w1, g) != abelianization(w2, g):
        return False
    if a == b:
        return True
    return b in positive_closure(a, g, budget)


def coxeter_reduce(w: Sequence[str], g: DefiningGraph, budget: int = CLOSURE_BUDGET) -> Tuple[str, ...]:
    """A reduced expression for w in the Coxeter quotient (Tits' algorithm)."""
    moves = _edge_moves(g)
    lengths = sorted({len(p) for p in moves})
    cur = tuple(w)
    while True:
        seen = {cur}
        queue = deque([cur])
        shorter = None
        while queue and shorter is None:
            u = queue.popleft()
            for i in range(len(u) - 1):
                if u[i] == u[i + 1]:
                    shorter = u[:i] + u[i + 2 :]
                    break
            if shorter is not None:
                break
            for v in _braid_neighbours(u, moves, lengths):
                if v not in seen:
                    seen.add(v)
                    if len(seen) > budget:
                        raise BudgetError(f"Coxeter closure exceeds {budget} words")
                    queue.append(v)
        if shorter is None:
            return min(seen)
        cur = shorter


def coxeter_equal(w1, w2, g: DefiningGraph, budget: int = CLOSURE_BUDGET) -> bool:
    w1, w2 = as_word(w1), as_word(w2)
    word = [x for x, _ in w1] + [x for x, _ in reversed(w2)]
    return not coxeter_reduce(word, g, budget)


# ---------------------------------------------------------------- rank two


def _to_ab(w: Sequence[Letter], a: str) -> List[Tuple[str, int]]:
    return [("a" if x == a else "b", s) for x, s in w]


def rank2_torus_key(word, m: int) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    """Amalgam normal form of a word over {a, b} in A_m, independent of Garside theory.

    For odd m, A_m is <x, y | x^2 = y^m> with x = Delta, y = ab, so
    a = y^-(m-1)/2 x and b = x^-1 y^(m+1)/2.  For even m, A_m is
    <a, y | a y^(m/2) = y^(m/2) a> with y = ab and b = a^-1 y.  Both are
    amalgams of abelian groups over a central infinite cyclic subgroup Z, so
    an element is Z^j followed by an alternating sequence of nontrivial coset
    representatives.  Side 0 is x (reps mod 2) or a (no reduction); side 1
    is y (reps mod m or m/2).
    """
    w = dihedral.parse_word(word)
    if m % 2:
        h = (m - 1) // 2
        image = {"a": [(1, -h), (0, 1)], "b": [(0, -1), (1, h + 1)]}
        period = {0: 2, 1: m}
    else:
        image = {"a": [(0, 1)], "b": [(0, -1), (1, 1)]}
        period = {0: None, 1: m // 2}
    j = 0
    seq: List[Tuple[int, int]] = []
    for g, s in w:
        parts = image[g] if s > 0 else [(side, -e) for side, e in reversed(image[g])]
        for side, e in parts:
            if seq and seq[-1][0] == side:
                e += seq.pop()[1]
            p = period[side]
            if p is not None:
                q, e = divmod(e, p)
                j += q
            if e:
                seq.append((side, e))
    return j, tuple(seq)


# ---------------------------------------------------------------- trees


def is_tree(g: DefiningGraph) -> bool:
    return len(g.vertices) >= 1 and is_connected(g.adjacency()) and len(g.labels) == len(g.vertices) - 1


def _cyclic_power(w: Sequence[Letter], v: str, g: DefiningGraph) -> Optional[int]:
    """t with w = v^t in A_g when w lies in <v>, otherwise None (g a tree)."""
    ab = abelianization(w, g)
    rep = odd_classes(g)
    t = ab[rep[v]]
    if any(val for r, val in ab.items() if r != rep[v]):
        return None
    return t if _tree_trivial(tuple(w) + ((v, -1 if t > 0 else 1),) * abs(t), g) else None


def _tree_trivial(w: Sequence[Letter], g: DefiningGraph) -> bool:
    w = free_reduce(w)
    if not w:
        return True
    used = {x for x, _ in w}
    sub = _support_tree(g, used)
    if len(sub.vertices) == 1:
        return sum(s for _, s in w) == 0
    if len(sub.vertices) == 2:
        a, b = sub.vertices
        el = dihedral.nf(_to_ab(w, a), sub.label(a, b))
        return el == dihedral.identity(el.m)
    adj = sub.adjacency()
    leaf = next(v for v in sub.vertices if len(adj[v]) == 1)
    seq = _amalgam_reduce(w, sub, leaf)
    return not seq


def _amalgam_reduce(w: Sequence[Letter], sub: DefiningGraph, leaf: str) -> List[List]:
    """Reduced syllable sequence of w in A_rest *_<hub> A_{leaf,hub}; empty means trivial.

    Syllables are [side, word] with side 1 for the leaf edge and 0 for the
    rest.  Any syllable lying in <hub> is absorbed into its neighbour until
    none is left, so what remains is a reduced alternating product.
    """
    adj = sub.adjacency()
    hub = next(iter(adj[leaf]))
    rest = sub.induced([v for v in sub.vertices if v != leaf])
    edge = sub.induced([leaf, hub])
    # hub letters join the previous syllable
    seq: List[List] = []
    for x, s in w:
        side = 1 if x == leaf else 0 if x != hub else (seq[-1][0] if seq else 0)
        if seq and seq[-1][0] == side:
            seq[-1][1].append((x, s))
        else:
            seq.append([side, [(x, s)]])
    while seq:
        found = None
        for i, (side, word) in enumerate(seq):
            t = _cyclic_power(word, hub, rest if side == 0 else edge)
            if t is not None:
                found = (i, t)
                break
        if found is None:
            return seq
        i, t = found
        piece = [(hub, 1 if t > 0 else -1)] * abs(t)
        del seq[i]
        if not seq:
            return [] if t == 0 else [[0, piece]]
        if i > 0:
            seq[i - 1][1].extend(piece)
        else:
            seq[0][1][:0] = piece
        merged: List[List] = []
        for side, word in seq:
            if merged and merged[-1][0] == side:
                merged[-1][1].extend(word)
            else:
                merged.append([side, list(word)])
        seq = merged
    return seq


def _tree_member(w: Sequence[Letter], target: Set[str], g: DefiningGraph) -> Optional[bool]:
    """Exact test of w in A_target for a tree g and connected target; None if target is not connected."""
    w = free_reduce(w)
    used = {x for x, _ in w}
    if used <= target:
        return True
    sub = _support_tree(g, used | target)
    if len(sub.vertices) <= 2:
        return _rank2_member(w, sorted(used, key=sub.vertices.index), target, sub)
    adj = sub.adjacency()
    leaf = next((v for v in sub.vertices if len(adj[v]) == 1 and v not in target), None)
    if leaf is None:
        return None
    seq = _amalgam_reduce(w, sub, leaf)
    if not seq:
        return True
    if len(seq) > 1 or seq[0][0] == 1:
        return False
    rest = sub.induced([v for v in sub.vertices if v != leaf])
    return _tree_member(seq[0][1], target, rest)


def _support_tree(g: DefiningGraph, used: Set[str]) -> DefiningGraph:
    """Smallest subtree containing ``used`` (parabolic subgroups embed, so this is harmless)."""
    adj = g.adjacency()
    keep = set(g.vertices)
    changed = True
    while changed:
        changed = False
        for v in list(keep):
            if v not in used and sum(u in keep for u in adj[v]) <= 1:
                keep.discard(v)
                changed = True
    return g.induced(keep)


def tree_equal(w1, w2, g: DefiningGraph) -> bool:
    if not is_tree(g):
        raise PreconditionError("tree_equal needs a tree-shaped graph")
    w1, w2 = as_word(w1), as_word(w2)
    return _tree_trivial(w1 + inverse(w2), g)


# ---------------------------------------------------------------- finite quotients


class FiniteQuotient:
    """A homomorphism A_Gamma -> GL_n(F_p) from a deformed reflection representation.

    Generator s acts by e_s -> -q e_s and e_u -> e_u + lam[s][u] e_s.  For an
    edge {s, t} labelled m we take lam[s][t] = 1 and pick lam[t][s] so that the
    two-dimensional block satisfies the length-m braid relation without the
    matrices commuting; non-adjacent pairs get lam = 0.  Every relation is
    re-checked on the full matrices, so the map is a homomorphism and differing
    images certify distinct elements.
    """

    def __init__(self, g: DefiningGraph, p: int, q: int, mats: Dict[str, "np.ndarray"]):
        self.graph = g
        self.p = p
        self.q = q
        self.mats = mats
        self.inv = {s: _mat_inverse(M, p) for s, M in mats.items()}
        self._subgroups: Dict[FrozenSet[str], Optional[Set[bytes]]] = {}
        self._arrays: Dict[tuple, object] = {}

    @classmethod
    def build(cls, g: DefiningGraph, p: int, q: int) -> Optional["FiniteQuotient"]:
        n = len(g.vertices)
        idx = {v: i for i, v in enumerate(g.vertices)}
        lam = np.zeros((n, n), dtype=np.int64)
        for a, b, m in g.edges():
            mu = _block_parameter(m, p, q)
            if mu is None:
                return None
            lam[idx[a], idx[b]] = 1
            lam[idx[b], idx[a]] = mu
        mats = {}
        for v in g.vertices:
            M = np.eye(n, dtype=np.int64)
            i = idx[v]
            M[i, :] = lam[i, :]
            M[i, i] = (-q) % p
            mats[v] = M % p
        for a, b, m in g.edges():
            if not np.array_equal(_alt(mats[a], mats[b], m, p), _alt(mats[b], mats[a], m, p)):
                return None
        return cls(g, p, q, mats)

    def image(self, w: Sequence[Letter]) -> "np.ndarray":
        n = len(self.graph.vertices)
        M = np.eye(n, dtype=np.int64)
        for x, s in w:
            M = (M @ (self.mats[x] if s > 0 else self.inv[x])) % self.p
        return M

    def subgroup_array(self, gens: Iterable[str], limit: int = 20_000):
        """The image subgroup as a stacked (k, n, n) array, or None past ``limit``."""
        key = ("array", frozenset(gens))
        if key not in self._arrays:
            sub = self.subgroup(key[1], limit)
            n = len(self.graph.vertices)
            self._arrays[key] = (
                None if sub is None else np.stack([np.frombuffer(b, dtype=np.int64).reshape(n, n) for b in sorted(sub)])
            )
        return self._arrays[key]

    def coset_key(self, M, gens: Iterable[str]) -> Optional[bytes]:
        """Canonical label of the left coset M * image(A_gens), or None when the subgroup is too big."""
        S = self.subgroup_array(gens)
        if S is None:
            return None
        flat = ((M @ S) % self.p).reshape(len(S), -1)
        first = np.lexsort(flat.T[::-1])[0]
        return flat[first].tobytes()

    def subgroup(self, gens: Iterable[str], limit: int = 200_000) -> Optional[Set[bytes]]:
        key = frozenset(gens)
        if key not in self._subgroups:
            n = len(self.graph.vertices)
            start = np.eye(n, dtype=np.int64)
            seen = {start.tobytes()}
            front = [start]
            mats = [self.mats[v] for v in sorted(key)]
            while front:
                nxt = []
                for M in front:
                    for G in mats:
                        N = (M @ G) % self.p
                        k = N.tobytes()
                        if k not in seen:
                            seen.add(k)
                            nxt.append(N)
                if len(seen) > limit:
                    self._subgroups[key] = None
                    return None
                front = nxt
            self._subgroups[key] = seen
        return self._subgroups[key]


def _alt(A, B, m: int, p: int):
    M = np.eye(len(A), dtype=np.int64)
    for i in range(m):
        M = (M @ (A if i % 2 == 0 else B)) % p
    return M


def _mat_inverse(M, p: int):
    """Gauss-Jordan inverse over F_p."""
    n = len(M)
    A = np.concatenate([M % p, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r, col] % p), None)
        if piv is None:
            raise ValueError("matrix is not invertible")
        A[[col, piv]] = A[[piv, col]]
        A[col] = (A[col] * pow(int(A[col, col]), -1, p)) % p
        for r in range(n):
            if r != col and A[r, col]:
                A[r] = (A[r] - A[r, col] * A[col]) % p
    return A[:, n:].copy()


def _block_parameter(m: int, p: int, q: int) -> Optional[int]:
    A = np.array([[(-q) % p, 1], [0, 1]], dtype=np.int64)
    for mu in range(1, p):
        B = np.array([[1, 0], [mu, (-q) % p]], dtype=np.int64)
        if np.array_equal(_alt(A, B, m, p), _alt(B, A, m, p)) and not np.array_equal((A @ B) % p, (B @ A) % p):
            return mu
    return None


QUOTIENT_PARAMETERS = ((5, 2), (7, 2), (7, 3), (11, 2), (11, 3), (13, 2), (13, 5))


@lru_cache(maxsize=64)
def quotient_family(g: DefiningGraph) -> Tuple[FiniteQuotient, ...]:
    out = []
    for p, q in QUOTIENT_PARAMETERS:
        fq = FiniteQuotient.build(g, p, q)
        if fq is not None:
            out.append(fq)
    return tuple(out)


def quotient_images(w, g: DefiningGraph) -> Tuple[bytes, ...]:
    return tuple(fq.image(w).tobytes() for fq in quotient_family(g))


def quotient_distinct(w1, w2, g: DefiningGraph) -> Optional[str]:
    for fq in quotient_family(g):
        if not np.array_equal(fq.image(w1), fq.image(w2)):
            return f"images differ in GL({len(g.vertices)}, F_{fq.p}) with q={fq.q}"
    return None


# ---------------------------------------------------------------- parabolic membership


def _rank2_member(w: Sequence[Letter], support: Sequence[str], target: Set[str], g: DefiningGraph) -> bool:
    """Exact test of w in A_target for w supported on at most two generators."""
    keep = [v for v in support if v in target]
    if len(keep) == len(support):
        return True
    if len(support) == 1:
        return not free_reduce(w)
    a, b = support
    m = g.label(a, b)
    if m is None:
        red = free_reduce(w)
        return all(x in keep for x, _ in red)
    el = dihedral.nf(_to_ab(w, a), m)
    if not keep:
        return el == dihedral.identity(m)
    c = "a" if keep[0] == a else "b"
    return dihedral.coset_equal_gen(dihedral.identity(m), el, c)


@lru_cache(maxsize=64)
def geometric_matrices(g: DefiningGraph) -> Dict[str, np.ndarray]:
    """Tits' geometric representation in floats; missing edges act as label infinity."""
    n = len(g.vertices)
    B = np.eye(n)
    for i, a in enumerate(g.vertices):
        for j, b in enumerate(g.vertices):
            if i != j:
                m = g.label(a, b)
                B[i, j] = -1.0 if m is None else -np.cos(np.pi / m)
    mats = {}
    for i, a in enumerate(g.vertices):
        M = np.eye(n)
        M[i, :] -= 2 * B[i, :]
        mats[a] = M
    return mats


def reflection_root(w: Sequence[Letter], a: str, g: DefiningGraph) -> np.ndarray:
    """The root w(alpha_a); the conjugate w a w^-1 maps to the reflection in it."""
    mats = geometric_matrices(g)
    v = np.zeros(len(g.vertices))
    v[g.vertices.index(a)] = 1.0
    for x, _ in reversed(w):
        v = mats[x] @ v
    return v


def roots_differ(r1: np.ndarray, r2: np.ndarray, tol: float = 1e-6) -> bool:
    """True only when the two roots are clearly not equal up to sign."""
    scale = max(1.0, float(np.abs(r1).max()), float(np.abs(r2).max()))
    gap = min(np.abs(r1 - r2).max(), np.abs(r1 + r2).max())
    return gap > tol * scale


def coxeter_in_parabolic(w: Sequence[Letter], target: Set[str], g: DefiningGraph, budget: int = CLOSURE_BUDGET) -> bool:
    """Whether the Coxeter image of w lies in W_target (all reduced words use the same letters)."""
    red = coxeter_reduce([x for x, _ in w], g, budget)
    return set(red) <= set(target)


def parabolic_member(w, target: Iterable[str], g: DefiningGraph, budget: int = SEARCH_BUDGET) -> OracleVerdict:
    """Decide w in A_target; Equal means 'is a member'."""
    tgt = set(target)
    w = free_reduce(as_word(w))
    support = sorted({x for x, _ in w}, key=g.vertices.index)
    if set(support) <= tgt:
        return Equal("support inside the parabolic")
    if len(support) <= 2:
        ok = _rank2_member(w, support, tgt, g)
        return Equal("rank-2 parabolic intersection") if ok else Distinct("rank-2 parabolic intersection")
    if is_tree(g):
        ok = _tree_member(w, tgt, g)
        if ok is not None:
            return Equal("tree amalgam reduction") if ok else Distinct("tree amalgam reduction")
    rep = odd_classes(g)
    live = {rep[v] for v in tgt}
    ab = abelianization(w, g)
    if any(val for r, val in ab.items() if r not in live):
        return Distinct("abelianization leaves the parabolic")
    try:
        if not coxeter_in_parabolic(w, tgt, g):
            return Distinct("Coxeter image outside the parabolic")
    except BudgetError:
        pass
    for fq in quotient_family(g):
        sub = fq.subgroup(tgt)
        if sub is not None and fq.image(w).tobytes() not in sub:
            return Distinct(f"image outside the parabolic image in GL({len(g.vertices)}, F_{fq.p})")
    if len(tgt) == 1:
        (s,) = tgt
        t = ab[rep[s]]
        v = artin_equal(w, ((s, 1 if t > 0 else -1),) * abs(t), g, budget)
        return v if not isinstance(v, Distinct) else Distinct("not the pinned power: " + v.certificate)
    return Unknown(0, budget)


# ---------------------------------------------------------------- bounded search


def _relator_conjugates(g: DefiningGraph) -> List[GroupWord]:
    out: List[GroupWord] = []
    for a, b, m in g.edges():
        p = positive(a if i % 2 == 0 else b for i in range(m))
        q = positive(b if i % 2 == 0 else a for i in range(m))
        r = p + inverse(q)
        for rel in (r, inverse(r)):
            for i in range(len(rel)):
                out.append(rel[i:] + rel[:i])
    return list(dict.fromkeys(out))


def _search_neighbours(u: GroupWord, conjs: List[GroupWord], cap: int):
    n = len(u)
    for c in conjs:
        L = len(c)
        for i in range(n + 1):
            for l in range(0, min(L, n - i) + 1):
                if l and u[i + l - 1] != c[l - 1]:
                    break
                new = free_reduce(u[:i] + inverse(c[l:]) + u[i + l :])
                if len(new) <= cap:
                    yield new


def search_equal(w1, w2, g: DefiningGraph, budget: int = SEARCH_BUDGET, cap: Optional[int] = None) -> Tuple[bool, int]:
    """Bidirectional search joining w1 to w2 by relator substitutions and free reduction.

    Returns (found, visited).  Words are kept freely reduced, so free
    insertions are implicit.  ``cap`` bounds word length (default
    2 * max length + 2 * max label).
    """
    a, b = free_reduce(as_word(w1)), free_reduce(as_word(w2))
    if a == b:
        return True, 1
    conjs = _relator_conjugates(g)
    if cap is None:
        mmax = max(g.labels.values(), default=0)
        cap = 2 * max(len(a), len(b)) + 2 * mmax
    sides = [{a}, {b}]
    fronts = [[a], [b]]
    while fronts[0] and fronts[1]:
        i = 0 if len(fronts[0]) <= len(fronts[1]) else 1
        other = sides[1 - i]
        nxt = []
        for u in fronts[i]:
            for v in _search_neighbours(u, conjs, cap):
                if v in other:
                    return True, len(sides[0]) + len(sides[1])
                if v not in sides[i]:
                    sides[i].add(v)
                    nxt.append(v)
                    if len(sides[0]) + len(sides[1]) > budget:
                        return False, len(sides[0]) + len(sides[1])
        fronts[i] = nxt
    return False, len(sides[0]) + len(sides[1])


def _trivial_small_support(w: GroupWord, g: DefiningGraph) -> Optional[OracleVerdict]:
    """Exact verdict on w = 1 when w uses at most two generators, else None."""
    gens = sorted({x for x, _ in w}, key=g.vertices.index)
    if len(gens) <= 1:
        return Equal("free reduction") if not w else Distinct("nontrivial power of one generator")
    if len(gens) > 2:
        return None
    a, b = gens
    m = g.label(a, b)
    if m is None:
        return Distinct("distinct reduced words in a free parabolic subgroup")
    x = dihedral.nf(_to_ab(w, a), m)
    return Equal("rank-2 normal form") if x == dihedral.identity(m) else Distinct(f"rank-2 normal form of w1^-1 w2 is {x}")


@lru_cache(maxsize=None)
def _dihedral_geodesics(m: int) -> Dict[dihedral.DihedralElement, Tuple[Letter, ...]]:
    return {x: tuple(w) for x, w in dihedral.ball_words(m, GEODESIC_RADIUS)}


def shorten_cyclic(w: Sequence[Letter], g: DefiningGraph) -> GroupWord:
    """A cyclic word conjugate to w, shortened by swapping two-generator pieces for geodesics."""
    w = cyclic_core(free_reduce(w))
    changed = True
    while changed and len({x for x, _ in w}) > 2:
        changed = False
        n = len(w)
        for i in range(n):
            pair: Set[str] = set()
            L = 0
            while L < min(n, GEODESIC_RADIUS + 1):
                x = w[(i + L) % n][0]
                if x not in pair and len(pair) == 2:
                    break
                pair.add(x)
                L += 1
            if len(pair) != 2 or L < 3:
                continue
            a, b = sorted(pair, key=g.vertices.index)
            m = g.label(a, b)
            if m is None:
                continue
            rot = w[i:] + w[:i]
            el = dihedral.nf(_to_ab(rot[:L], a), m)
            geo = _dihedral_geodesics(m).get(el)
            if geo is not None and len(geo) < L:
                piece = tuple((a if x == "a" else b, e) for x, e in geo)
                w = cyclic_core(free_reduce(piece + rot[L:]))
                changed = True
                break
    return w


# ---------------------------------------------------------------- large type: geodesic reduction
#
# Holt and Rees: in a large-type Artin group a geodesic v followed by a letter
# c is non-geodesic exactly when a chain of tau-moves on two-generator
# subwords of v, running to the right end, turns the last letter into c^-1.
# Two-generator words are geodesic iff p + n <= m (longest positive and
# negative alternating subwords, capped at m).


class ReductionError(RuntimeError):
    """An invariant of the large-type reduction failed; the route gives no verdict."""


def _alternating_block(w: Sequence[Letter], sign: int) -> bool:
    return all(e == sign for _, e in w) and all(w[i][0] != w[i + 1][0] for i in range(len(w) - 1))


def _longest_alternating(w: Sequence[Letter], sign: int) -> int:
    best = run = 0
    for i, (x, e) in enumerate(w):
        if e != sign:
            run = 0
        elif run and w[i - 1][0] != x:
            run += 1
        else:
            run = 1
        best = max(best, run)
    return best


def pair_geodesic(w: Sequence[Letter], m: int) -> bool:
    """Geodesic test for a freely reduced word on two generators with label m."""
    p = min(m, _longest_alternating(w, 1))
    n = min(m, _longest_alternating(w, -1))
    return p + n <= m


def _alternating(first: str, other: str, length: int, sign: int) -> List[Letter]:
    return [((first, other)[i % 2], sign) for i in range(length)]


def _flip(w: Sequence[Letter]) -> List[Letter]:
    return [(x, -e) for x, e in w]


def _tau_positive_first(w: List[Letter], pair: Tuple[str, str], m: int) -> Set[GroupWord]:
    """Rewrites of w = P xi N (P positive, N negative alternating, |P| + |N| = m)."""
    x, y = pair
    delta = {x: y, y: x} if m % 2 else {x: x, y: y}
    out = set()
    for p in range(m + 1):
        n = m - p
        if p + n > len(w):
            continue
        P, N, xi = w[:p], w[len(w) - n :], w[p : len(w) - n]
        if not (_alternating_block(P, 1) and _alternating_block(N, -1)):
            continue
        # P = L^-1 Delta and N = R Delta^-1, so w = L^-1 delta(xi R)
        if p:
            other = y if P[0][0] == x else x
            Ls = [_alternating(other if n % 2 else P[0][0], P[0][0] if n % 2 else other, n, 1)]
        else:
            Ls = [_alternating(x, y, m, 1), _alternating(y, x, m, 1)]
        if n:
            t = N[-1][0]
            s = y if t == x else x
            first_r = s if n % 2 else t
            Rs = [_alternating(first_r, t if first_r == s else s, p, 1)]
        else:
            Rs = [_alternating(x, y, m, 1), _alternating(y, x, m, 1)]
        for L in Ls:
            for R in Rs:
                cand = tuple(inverse(L)) + tuple((delta[a], e) for a, e in xi + R)
                if len(cand) == len(w) and free_reduce(cand) == cand:
                    out.add(cand)
    out.discard(tuple(w))
    return out


def tau_moves(w: Sequence[Letter], m: int) -> Set[GroupWord]:
    """Same-length rewrites of a two-generator critical word (p + n = m) that swap its end blocks."""
    w = list(w)
    gens = sorted({a for a, _ in w})
    if len(gens) != 2:
        return set()
    pair = (gens[0], gens[1])
    out = _tau_positive_first(w, pair, m)
    out |= {tuple(_flip(u)) for u in _tau_positive_first(_flip(w), pair, m)}
    return out


def _rightward(v: GroupWord, c: Letter, g: DefiningGraph) -> Optional[GroupWord]:
    """v c shortened to a word of length |v| - 1, or None when v c is geodesic."""
    target = (c[0], -c[1])
    memo: Dict[Tuple[int, Optional[Letter]], Optional[GroupWord]] = {}

    def chain(pos: int, carry: Optional[Letter]) -> Optional[GroupWord]:
        key = (pos, carry)
        if key in memo:
            return memo[key]
        memo[key] = None
        head = [carry] if carry else []
        gens: Set[str] = {carry[0]} if carry else set()
        for e in range(pos + 1, len(v) + 1):
            gens.add(v[e - 1][0])
            if len(gens) > 2:
                break
            if len(gens) < 2:
                continue
            a, b = sorted(gens)
            m = g.label(a, b)
            if m is None:
                break
            for t in sorted(tau_moves(head + list(v[pos:e]), m)):
                if e == len(v):
                    if t[-1] == target:
                        memo[key] = t[:-1]
                        return memo[key]
                else:
                    rest = chain(e, t[-1])
                    if rest is not None:
                        memo[key] = t[:-1] + rest
                        return memo[key]
        return None

    for s in range(len(v)):
        rest = chain(s, None)
        if rest is not None:
            return v[:s] + rest
    return None


def is_large_type(g: DefiningGraph) -> bool:
    return all(m >= 3 for m in g.labels.values())


def geodesic_reduce(w: Sequence[Letter], g: DefiningGraph) -> GroupWord:
    """A geodesic word for the element w of a large-type A_Gamma; empty iff w = 1."""
    if not is_large_type(g):
        raise PreconditionError("geodesic reduction needs every label >= 3")
    v: GroupWord = ()
    for c in as_word(w):
        if v and v[-1] == (c[0], -c[1]):
            v = v[:-1]
            continue
        shorter = _rightward(v, c, g)
        if shorter is None:
            v = v + (c,)
            continue
        if len(shorter) != len(v) - 1 or free_reduce(shorter) != shorter:
            raise ReductionError(f"reduction of {word_text(v + (c,))} gave {word_text(shorter)}")
        v = shorter
    return v


def artin_equal(w1, w2, g: DefiningGraph, budget: int = SEARCH_BUDGET) -> OracleVerdict:
    w1, w2 = free_reduce(as_word(w1)), free_reduce(as_word(w2))
    if w1 == w2:
        return Equal("free reduction")
    ab1, ab2 = abelianization(w1, g), abelianization(w2, g)
    if ab1 != ab2:
        return Distinct(f"abelianization {ab1} != {ab2}")
    # w1 = w2 iff w1^-1 w2 = 1, and triviality survives conjugation
    both = cyclic_core(free_reduce(inverse(w1) + w2))
    small = _trivial_small_support(both, g)
    if small is None:
        both = shorten_cyclic(both, g)
        small = _trivial_small_support(both, g)
    if small is not None:
        return small
    if is_tree(g):
        return Equal("tree normal form") if tree_equal(w1, w2, g) else Distinct("tree normal form")
    if is_positive(w1) and is_positive(w2):
        try:
            same = positive_equal(w1, w2, g)
        except BudgetError:
            same = None
        if same is True:
            return Equal("positive closure")
        if same is False:
            return Distinct("positive closure (monoid embeds)")
    w1, w2 = (), both
    try:
        if not coxeter_equal(w1, w2, g):
            return Distinct("Coxeter quotient")
    except BudgetError:
        pass
    cert = quotient_distinct(w1, w2, g)
    if cert:
        return Distinct(cert)
    if is_large_type(g):
        try:
            rest = geodesic_reduce(both, g)
        except ReductionError:
            rest = None
        if rest == ():
            return Equal("large-type geodesic reduction")
        if rest is not None:
            return Distinct(f"w1^-1 w2 has nonempty geodesic {word_text(rest)}")
    found, visited = search_equal(w1, w2, g, budget)
    if found:
        return Equal("bounded search")
    return Unknown(visited, budget)
