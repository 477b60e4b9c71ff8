"""The free path groupoid G(E): irreducible words over real and ghost edges.

Words are written in path order: a letter ``(f, False)`` is the real edge f,
``(f, True)`` its ghost f*.  Extended endpoints are d(f*) = r(f) and
r(f*) = d(f).  The groupoid product ``g·h`` is defined when r(g) = d(h) and is
the reduced concatenation; in groupoid terms t(g) = d(g) and s(g) = r(g).
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .graph import Graph
from .reports import Check, sampled

Letter = tuple[str, bool]


class WalkError(ValueError):
    pass


def letter_d(g: Graph, letter: Letter) -> str:
    edge, star = letter
    return g.r(edge) if star else g.d(edge)


def letter_r(g: Graph, letter: Letter) -> str:
    edge, star = letter
    return g.d(edge) if star else g.r(edge)


def letter_str(letter: Letter) -> str:
    return letter[0] + ("^*" if letter[1] else "")


def letter_key(g: Graph, letter: Letter):
    return (g.edge_index[letter[0]], letter[1])


@dataclass(frozen=True)
class ReducedWalk:
    """An irreducible element of G(E).  ``base`` is d(g); for the empty word it
    is the vertex whose identity morphism this is."""

    graph: Graph = field(compare=False, repr=False)
    letters: tuple[Letter, ...]
    base: str

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @property
    def d(self) -> str:
        return self.base

    @property
    def r(self) -> str:
        return letter_r(self.graph, self.letters[-1]) if self.letters else self.base

    # groupoid conventions
    @property
    def source(self) -> str:
        return self.r

    @property
    def target(self) -> str:
        return self.d

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return self.base
        return ".".join(letter_str(x) for x in self.letters)

    def sort_key(self):
        g = self.graph
        return (tuple(letter_key(g, x) for x in self.letters), g.vertex_index[self.base])

    def __mul__(self, other: "ReducedWalk") -> "ReducedWalk":
        return compose(self, other)

    def inverse(self) -> "ReducedWalk":
        return invert(self)


def identity(g: Graph, v: str) -> ReducedWalk:
    if v not in g.vertex_index:
        raise WalkError(f"unknown vertex {v!r}")
    return ReducedWalk(g, (), v)


def edge_walk(g: Graph, name: str, star: bool = False) -> ReducedWalk:
    if name not in g.edge:
        raise WalkError(f"unknown edge {name!r}")
    letter = (name, star)
    return ReducedWalk(g, (letter,), letter_d(g, letter))


def path_walk(g: Graph, v: str, edges: Sequence[str]) -> ReducedWalk:
    """Positive path starting at ``v`` (the vertex itself when ``edges`` is empty)."""
    return reduce(g, [(f, False) for f in edges], base=v)


def _as_letter(g: Graph, token) -> Letter:
    if isinstance(token, tuple):
        letter = (token[0], bool(token[1]))
    else:
        token = token.strip()
        star = token.endswith("^*") or token.endswith("*")
        name = token[:-2] if token.endswith("^*") else token.rstrip("*")
        letter = (name, star)
    if letter[0] not in g.edge:
        raise WalkError(f"unknown edge {letter[0]!r}")
    return letter


def reduce(g: Graph, word: Iterable, base: str | None = None) -> ReducedWalk:
    """irr(word): cancel adjacent (f, f*) and (f*, f) pairs.

    The rewriting system is length-reducing and locally confluent, so a single
    stack pass yields the unique normal form."""
    letters = [_as_letter(g, t) for t in word]
    if not letters:
        if base is None:
            raise WalkError("empty word needs a base vertex")
        return identity(g, base)
    for a, b in zip(letters, letters[1:]):
        if letter_r(g, a) != letter_d(g, b):
            raise WalkError(f"letters {letter_str(a)} and {letter_str(b)} are not composable")
    start = letter_d(g, letters[0])
    if base is not None and base != start:
        raise WalkError(f"word starts at {start!r}, not at base {base!r}")
    stack: list[Letter] = []
    for x in letters:
        if stack and stack[-1][0] == x[0] and stack[-1][1] != x[1]:
            stack.pop()
        else:
            stack.append(x)
    return ReducedWalk(g, tuple(stack), start)


def parse_walk(g: Graph, text: str) -> ReducedWalk:
    """Walk syntax: tokens joined by '.', ghosts suffixed with '^*', a lone
    vertex name for an identity."""
    text = text.strip()
    if not text:
        raise WalkError("empty walk")
    tokens = [t.strip() for t in text.split(".")]
    if len(tokens) == 1 and tokens[0] in g.vertex_index:
        return identity(g, tokens[0])
    return reduce(g, tokens)


def compose(g1: ReducedWalk, g2: ReducedWalk) -> ReducedWalk:
    if g1.r != g2.d:
        raise WalkError(f"cannot compose {g1} (ends at {g1.r}) with {g2} (starts at {g2.d})")
    return reduce(g1.graph, g1.letters + g2.letters, base=g1.d)


def composable(g1: ReducedWalk, g2: ReducedWalk) -> bool:
    return g1.r == g2.d


def invert(g1: ReducedWalk) -> ReducedWalk:
    if not g1.letters:
        return g1
    letters = tuple((e, not s) for e, s in reversed(g1.letters))
    return ReducedWalk(g1.graph, letters, g1.r)


def endpoints(g1: ReducedWalk) -> dict[str, str]:
    """Both conventions: groupoid s, t and path d, r."""
    return {"s": g1.source, "t": g1.target, "d": g1.d, "r": g1.r}


@dataclass(frozen=True)
class WalkClass:
    tag: str  # "Vertex", "W1", "Wm1", "W2", "Other"
    a: tuple[str, ...] = ()
    b: tuple[str, ...] = ()


def split_real_ghost(g1: ReducedWalk):
    """Write g1 = a·b⁻¹ with a, b positive paths (possibly vertices).

    Returns ``((d(a), a), (d(b), b))`` or ``None`` if g1 is not of that shape."""
    letters = g1.letters
    k = 0
    while k < len(letters) and not letters[k][1]:
        k += 1
    if any(not s for _, s in letters[k:]):
        return None
    a = tuple(e for e, _ in letters[:k])
    b = tuple(e for e, _ in reversed(letters[k:]))
    return (g1.d, a), (g1.r, b)


def classify(g1: ReducedWalk) -> WalkClass:
    if not g1.letters:
        return WalkClass("Vertex")
    split = split_real_ghost(g1)
    if split is None:
        return WalkClass("Other")
    (_, a), (_, b) = split
    if not b:
        return WalkClass("W1", a=a)
    if not a:
        return WalkClass("Wm1", b=b)
    return WalkClass("W2", a=a, b=b)


def available_letters(g: Graph, v: str) -> list[Letter]:
    """Letters that can follow a word ending at v, in (edge, star) order."""
    letters = [(f, False) for f in g.out_edges[v]] + [(f, True) for f in g.in_edges[v]]
    return sorted(letters, key=lambda x: letter_key(g, x))


def enumerate_walks(g: Graph, max_len: int, start: str | None = None) -> Iterator[ReducedWalk]:
    """All reduced walks of length <= max_len, in (length, lexicographic) order."""
    starts = [start] if start is not None else list(g.vertices)
    layer = [identity(g, v) for v in starts]
    yield from layer
    for _ in range(max_len):
        nxt = []
        for w in layer:
            last = w.letters[-1] if w.letters else None
            for x in available_letters(g, w.r):
                if last is not None and x[0] == last[0] and x[1] != last[1]:
                    continue
                nxt.append(ReducedWalk(g, w.letters + (x,), w.base))
        nxt.sort(key=lambda w: w.sort_key())
        yield from nxt
        layer = nxt
        if not layer:
            break


def positive_paths(g: Graph, v: str, max_len: int) -> list[tuple[str, ...]]:
    """Edge tuples of directed paths from v of length <= max_len (v itself as ())."""
    out = [()]
    frontier = [((), v)]
    for _ in range(max_len):
        nxt = []
        for path, w in frontier:
            for f in g.out_edges[w]:
                nxt.append((path + (f,), g.r(f)))
        out.extend(p for p, _ in nxt)
        frontier = nxt
    return out


def random_walk(g: Graph, rng: random.Random, max_len: int, start: str | None = None) -> ReducedWalk:
    v = start if start is not None else rng.choice(g.vertices)
    letters: list[Letter] = []
    for _ in range(rng.randint(0, max_len)):
        here = letter_r(g, letters[-1]) if letters else v
        choices = [
            x
            for x in available_letters(g, here)
            if not (letters and x[0] == letters[-1][0] and x[1] != letters[-1][1])
        ]
        if not choices:
            break
        letters.append(rng.choice(choices))
    return ReducedWalk(g, tuple(letters), v)


def random_fraction_walk(g: Graph, rng: random.Random, max_len: int) -> ReducedWalk:
    """A random walk of the shape a·b⁻¹ (vertex, W1, Wm1 or W2), which is where
    the cylinder sets are non-empty."""
    for _ in range(100):
        v = rng.choice(g.vertices)
        la = rng.randint(0, max_len)
        path = []
        w = v
        for _ in range(la):
            if not g.out_edges[w]:
                break
            f = rng.choice(g.out_edges[w])
            path.append(f)
            w = g.r(f)
        lb = rng.randint(0, max(0, max_len - len(path)))
        # b ends at w: walk backwards along in-edges
        bpath = []
        u = w
        for _ in range(lb):
            if not g.in_edges[u]:
                break
            f = rng.choice(g.in_edges[u])
            bpath.append(f)
            u = g.d(f)
        bpath.reverse()
        if path and bpath and path[-1] == bpath[-1]:
            continue
        letters = [(f, False) for f in path] + [(f, True) for f in reversed(bpath)]
        return reduce(g, letters, base=v) if letters else identity(g, v)
    return identity(g, rng.choice(g.vertices))


def spanning_tree_walks(g: Graph, v: str):
    """BFS spanning tree of v's component (undirected, declaration order).

    Returns ``(tree_walk, tree_edges)`` where ``tree_walk[w]`` is the reduced
    walk from v to w in path order."""
    if v not in g.vertex_index:
        raise WalkError(f"unknown vertex {v!r}")
    tree_walk = {v: identity(g, v)}
    tree_edges = set()
    queue = deque([v])
    while queue:
        w = queue.popleft()
        for e in g.edges:
            if e.source == w and e.range not in tree_walk:
                nxt, letter = e.range, (e.name, False)
            elif e.range == w and e.source not in tree_walk:
                nxt, letter = e.source, (e.name, True)
            else:
                continue
            tree_walk[nxt] = reduce(g, tree_walk[w].letters + (letter,), base=v)
            tree_edges.add(e.name)
            queue.append(nxt)
    return tree_walk, tree_edges


def isotropy_generators(g: Graph, v: str) -> list[ReducedWalk]:
    """Free generators of the isotropy group G(E)(v), one per non-tree edge."""
    tree_walk, tree_edges = spanning_tree_walks(g, v)
    gens = []
    for e in g.edges:
        if e.name in tree_edges or e.source not in tree_walk:
            continue
        p, q = tree_walk[e.source], tree_walk[e.range]
        gens.append(reduce(g, p.letters + ((e.name, False),) + invert(q).letters, base=v))
    return gens


def conjugate_to_isotropy(g1: ReducedWalk, tr) -> ReducedWalk:
    """g_x = τ_{t(g)}⁻¹ · g · τ_{s(g)}, an element of the isotropy group at the
    transversal's base."""
    try:
        left, right = tr[g1.target], tr[g1.source]
    except KeyError as exc:
        raise WalkError(f"vertex {exc.args[0]!r} is outside the transversal's domain") from None
    return compose(compose(invert(left), g1), right)



def insert_cancelling_pairs(g1: ReducedWalk, rng: random.Random, count: int) -> list[Letter]:
    """The letters of g1 with ``count`` pairs x·x⁻¹ inserted at random
    composable positions (possibly nested inside earlier insertions)."""
    g = g1.graph
    letters = list(g1.letters)
    for _ in range(count):
        pos = rng.randint(0, len(letters))
        here = letter_r(g, letters[pos - 1]) if pos else g1.d
        choices = available_letters(g, here)
        if not choices:
            continue
        f, star = rng.choice(choices)
        letters[pos:pos] = [(f, star), (f, not star)]
    return letters


def verify_reduction_confluence(g: Graph, samples: int = 1000, seed: int = 0, max_len: int = 6) -> Check:
    """reduce recovers an irreducible word after random cancelling insertions."""
    rng = random.Random(seed)
    for _ in range(samples):
        w = random_walk(g, rng, max_len)
        noisy = insert_cancelling_pairs(w, rng, rng.randint(1, 4))
        if reduce(g, noisy, base=w.d) != w:
            text = ".".join(letter_str(x) for x in noisy)
            return Check("reduction confluence", False, sampled(samples, seed), witness=f"{text} does not reduce to {w}")
    return Check("reduction confluence", True, sampled(samples, seed))


def verify_groupoid_laws(g: Graph, samples: int = 500, seed: int = 0, max_len: int = 5) -> Check:
    """Associativity where defined and the two inverse laws on random walks."""
    rng = random.Random(seed)
    for _ in range(samples):
        a = random_walk(g, rng, max_len)
        b = random_walk(g, rng, max_len, start=a.r)
        c = random_walk(g, rng, max_len, start=b.r)
        if compose(compose(a, b), c) != compose(a, compose(b, c)):
            return Check("groupoid laws", False, sampled(samples, seed), witness=f"associativity at {a}, {b}, {c}")
        if compose(a, invert(a)) != identity(g, a.d) or compose(invert(a), a) != identity(g, a.r):
            return Check("groupoid laws", False, sampled(samples, seed), witness=f"inverse law at {a}")
    return Check("groupoid laws", True, sampled(samples, seed))
