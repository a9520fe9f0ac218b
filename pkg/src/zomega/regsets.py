"""Finitely presented compact subsets of Z^omega and their decidable algebra.

A :class:`RegularCompact` denotes a nonempty compact set of infinite integer
sequences: the branches of a finite, pruned, deterministic transition system
in which every state has finitely many outgoing letters and at least one.
Sets are constructed from the pruned-tree-plus-periodic-tails presentation
(:class:`TailSpec`, :func:`from_tree`) but are stored as the minimal
automaton in a canonical state order, so ``==`` is semantic equality.

The tree+tails presentation is *not* closed under intersection or Minkowski
sum when the operands' block structures are misaligned (the result can be a
non-renewal safety language), which is why the operations below work on the
automaton form: product and powerset constructions keep every operation
exact and the class closed.

Set notation used by the CLI and certificate files:

* canonical (printed) form: ``aut:<edges of state 0>;<edges of state 1>;...``
  with edges ``letter->target`` joined by ``,``; states are numbered in the
  canonical BFS order and state 0 is the root;
* tree form (accepted on input): ``tree:<leaf>:<L>:[w1|w2|...];...`` giving
  each depth-d leaf word and its tail spec, e.g. ``tree::1:[0|1]`` for the
  full binary space.

``parse_set(format_set(K)) == K`` holds for every value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from zomega.seqcore import RegularPoint, Word, format_word, parse_word

RawTrans = list[dict[int, int]]


@dataclass(frozen=True)
class TailSpec:
    """Tail language: all infinite concatenations of words drawn from a
    fixed nonempty set of equal-length blocks."""

    block_len: int
    words: frozenset[Word]

    def __post_init__(self) -> None:
        if self.block_len <= 0:
            raise ValueError("block length must be positive")
        words = frozenset(tuple(w) for w in self.words)
        if not words:
            raise ValueError("tail word set must be nonempty")
        if any(len(w) != self.block_len for w in words):
            raise ValueError("every tail word must have length block_len")
        object.__setattr__(self, "words", words)


class RegularCompact:
    """Nonempty compact subset of Z^omega in canonical automaton form.

    Instances come from the module constructors (:func:`from_tree`,
    :func:`pure_tail`, :func:`singleton`, ...) or from the algebra, all of
    which canonicalize; two values are ``==`` iff they denote the same set.
    """

    __slots__ = ("trans", "_hash", "_profile")

    def __init__(self, trans: tuple[tuple[tuple[int, int], ...], ...]):
        self.trans = trans
        self._hash = hash(trans)
        self._profile: Optional[tuple] = None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RegularCompact) and self.trans == other.trans

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"RegularCompact({format_set(self)!r})"

    @property
    def n_states(self) -> int:
        return len(self.trans)

    def step(self, state: int, letter: int) -> Optional[int]:
        for a, t in self.trans[state]:
            if a == letter:
                return t
        return None


def _canonicalize(raw: RawTrans, root: int) -> Optional[RegularCompact]:
    """Prune, minimize and BFS-renumber a raw deterministic table.

    Returns None when pruning kills the root (the denoted set is empty).
    """
    n = len(raw)
    alive = [bool(d) for d in raw]
    changed = True
    while changed:
        changed = False
        for q in range(n):
            if alive[q] and not any(alive[t] for t in raw[q].values()):
                alive[q] = False
                changed = True
    if not alive[root]:
        return None
    trimmed = [
        {a: t for a, t in raw[q].items() if alive[t]} if alive[q] else {}
        for q in range(n)
    ]

    # Moore refinement; every state of a safety automaton accepts, so the
    # initial partition is a single block.
    block = [0 if alive[q] else -1 for q in range(n)]
    while True:
        sigs: dict[tuple, int] = {}
        new_block = list(block)
        for q in range(n):
            if block[q] < 0:
                continue
            sig = (block[q], tuple(sorted((a, block[t]) for a, t in trimmed[q].items())))
            new_block[q] = sigs.setdefault(sig, len(sigs))
        if new_block == block:
            break
        block = new_block

    order: dict[int, int] = {block[root]: 0}
    rep: dict[int, int] = {block[root]: root}
    queue = [block[root]]
    pos = 0
    while pos < len(queue):
        b = queue[pos]
        pos += 1
        q = rep[b]
        for a in sorted(trimmed[q]):
            tb = block[trimmed[q][a]]
            if tb not in order:
                order[tb] = len(order)
                rep[tb] = trimmed[q][a]
                queue.append(tb)
    table = []
    for b in queue:
        q = rep[b]
        table.append(tuple(sorted((a, order[block[t]]) for a, t in trimmed[q].items())))
    return RegularCompact(tuple(table))


# ---------------------------------------------------------------------------
# constructors


def from_tree(depth: int, tails: dict[Word, TailSpec]) -> RegularCompact:
    """Build from the pruned-tree presentation: every key is a depth-``depth``
    leaf word and maps to the tail language hanging below it.  ``depth`` 0
    with the single leaf ``()`` is the degenerate pure-tail set."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if not tails:
        raise ValueError("tree must have at least one leaf")
    leaves = {tuple(w): spec for w, spec in tails.items()}
    if any(len(w) != depth for w in leaves):
        raise ValueError("every leaf must have length exactly depth")

    raw: RawTrans = []

    def new_state() -> int:
        raw.append({})
        return len(raw) - 1

    root = new_state()
    trie: dict[Word, int] = {(): root}
    for leaf in sorted(leaves):
        for i in range(depth):
            node = leaf[: i + 1]
            if node not in trie:
                trie[node] = new_state()
            raw[trie[leaf[:i]]][leaf[i]] = trie[node]

    for leaf in sorted(leaves):
        spec = leaves[leaf]
        t_root = trie[leaf]
        prefixes: dict[Word, int] = {(): t_root}
        for w in sorted(spec.words):
            for i in range(spec.block_len):
                pre = w[: i + 1]
                src = prefixes[w[:i]]
                if i + 1 == spec.block_len:
                    raw[src][w[i]] = t_root
                elif pre not in prefixes:
                    prefixes[pre] = new_state()
                    raw[src][w[i]] = prefixes[pre]

    out = _canonicalize(raw, root)
    assert out is not None
    return out


def pure_tail(spec: TailSpec) -> RegularCompact:
    return from_tree(0, {(): spec})


def full_space(alphabet: Iterable[int]) -> RegularCompact:
    return pure_tail(TailSpec(1, frozenset((a,) for a in alphabet)))


def singleton(p: RegularPoint) -> RegularCompact:
    h, per = len(p.head), len(p.period)
    raw: RawTrans = [{} for _ in range(h + per)]
    for i in range(h):
        raw[i][p.head[i]] = i + 1
    for j in range(per):
        raw[h + j][p.period[j]] = h + (j + 1) % per
    out = _canonicalize(raw, 0)
    assert out is not None
    return out


# ---------------------------------------------------------------------------
# queries


def prefix_set(K: RegularCompact, n: int) -> frozenset[Word]:
    """Exactly the length-``n`` initial segments of branches of ``K``."""
    if n < 0:
        raise ValueError("depth must be nonnegative")
    level: list[tuple[Word, int]] = [((), 0)]
    for _ in range(n):
        level = [(w + (a,), t) for w, q in level for a, t in K.trans[q]]
    return frozenset(w for w, _ in level)


def count_prefixes(K: RegularCompact, n: int, cap: int) -> int:
    """Number of depth-``n`` prefixes, saturating at ``cap``."""
    counts = {0: 1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for q, c in counts.items():
            for _, t in K.trans[q]:
                nxt[t] = nxt.get(t, 0) + c
        if sum(nxt.values()) >= cap:
            return cap
        counts = nxt
    return sum(counts.values())


def enumerate_prefixes(K: RegularCompact, n: int, cap: int) -> Optional[frozenset[Word]]:
    """Depth-``n`` prefix set, or None as soon as more than ``cap`` branches
    would have to be listed.  Usable at large ``n`` for thin automata."""
    if count_prefixes(K, n, cap + 1) > cap:
        return None
    out: list[Word] = []
    stack: list[tuple[list[int], int]] = [([], 0)]
    while stack:
        w, q = stack.pop()
        if len(w) == n:
            out.append(tuple(w))
            continue
        for a, t in K.trans[q]:
            stack.append((w + [a], t))
    return frozenset(out)


def is_prefix(K: RegularCompact, w: Word) -> bool:
    q = 0
    for a in w:
        nxt = K.step(q, a)
        if nxt is None:
            return False
        q = nxt
    return True


def member(K: RegularCompact, p: RegularPoint) -> bool:
    """Exact branch membership for an eventually periodic point: simulate
    until the (state, phase) pair repeats."""
    q = 0
    h, per = len(p.head), len(p.period)
    seen: set[tuple[int, int]] = set()
    n = 0
    while True:
        if n >= h:
            key = (q, (n - h) % per)
            if key in seen:
                return True
            seen.add(key)
        nxt = K.step(q, p[n])
        if nxt is None:
            return False
        q = nxt
        n += 1


def lex_least_branch(K: RegularCompact) -> RegularPoint:
    """The branch obtained by always following the smallest letter."""
    q = 0
    seen: dict[int, int] = {}
    values: list[int] = []
    while q not in seen:
        seen[q] = len(values)
        a, t = K.trans[q][0]
        values.append(a)
        q = t
    onset = seen[q]
    return RegularPoint(tuple(values[:onset]), tuple(values[onset:]))


def sub_automaton(K: RegularCompact, state: int) -> RegularCompact:
    out = _canonicalize([dict(st) for st in K.trans], state)
    assert out is not None
    return out


def branch_through(K: RegularCompact, w: Word) -> RegularPoint:
    """Lexicographically least branch extending the viable prefix ``w``."""
    q = 0
    for a in w:
        nxt = K.step(q, a)
        if nxt is None:
            raise ValueError(f"{w!r} is not a prefix of the set")
        q = nxt
    tail = lex_least_branch(sub_automaton(K, q))
    return RegularPoint(tuple(w) + tail.head, tail.period)


# ---------------------------------------------------------------------------
# algebra


def translate(K: RegularCompact, g: RegularPoint) -> RegularCompact:
    """Pointwise translate ``K + g``."""
    h, per = len(g.head), len(g.period)

    def phase_val(phase: int) -> int:
        return g.head[phase] if phase < h else g.period[(phase - h) % per]

    def next_phase(phase: int) -> int:
        np = phase + 1
        return np if np < h else h + (np - h) % per

    states: dict[tuple[int, int], int] = {(0, 0): 0}
    raw: RawTrans = [{}]
    stack = [(0, 0)]
    while stack:
        q, phase = stack.pop()
        src = states[(q, phase)]
        gv = phase_val(phase)
        np = next_phase(phase)
        for a, t in K.trans[q]:
            key = (t, np)
            if key not in states:
                states[key] = len(raw)
                raw.append({})
                stack.append(key)
            raw[src][a + gv] = states[key]
    out = _canonicalize(raw, 0)
    assert out is not None
    return out


def negate(K: RegularCompact) -> RegularCompact:
    raw: RawTrans = [{-a: t for a, t in st} for st in K.trans]
    out = _canonicalize(raw, 0)
    assert out is not None
    return out


def _determinize(initial: frozenset, expand) -> RegularCompact:
    """Powerset construction over a pruned NFA; ``expand`` maps a state set
    to ``{letter: successor state set}``."""
    states: dict[frozenset, int] = {initial: 0}
    raw: RawTrans = [{}]
    stack = [initial]
    while stack:
        s = stack.pop()
        q = states[s]
        for a, target in expand(s).items():
            if target not in states:
                states[target] = len(raw)
                raw.append({})
                stack.append(target)
            raw[q][a] = states[target]
    out = _canonicalize(raw, 0)
    assert out is not None
    return out


def minkowski(K1: RegularCompact, K2: RegularCompact) -> RegularCompact:
    """Minkowski sum ``K1 + K2`` (exact)."""

    def expand(s: frozenset) -> dict[int, frozenset]:
        out: dict[int, set] = {}
        for q1, q2 in s:
            for a1, t1 in K1.trans[q1]:
                for a2, t2 in K2.trans[q2]:
                    out.setdefault(a1 + a2, set()).add((t1, t2))
        return {a: frozenset(v) for a, v in out.items()}

    return _determinize(frozenset({(0, 0)}), expand)


def union(K1: RegularCompact, K2: RegularCompact) -> RegularCompact:
    def expand(s: frozenset) -> dict[int, frozenset]:
        out: dict[int, set] = {}
        for side, q in s:
            K = K1 if side == 0 else K2
            for a, t in K.trans[q]:
                out.setdefault(a, set()).add((side, t))
        return {a: frozenset(v) for a, v in out.items()}

    return _determinize(frozenset({(0, 0), (1, 0)}), expand)


def intersect(K1: RegularCompact, K2: RegularCompact) -> Optional[RegularCompact]:
    """Intersection, or None when empty."""
    states: dict[tuple[int, int], int] = {(0, 0): 0}
    raw: RawTrans = [{}]
    stack = [(0, 0)]
    while stack:
        q1, q2 = stack.pop()
        src = states[(q1, q2)]
        m2 = dict(K2.trans[q2])
        for a, t1 in K1.trans[q1]:
            t2 = m2.get(a)
            if t2 is None:
                continue
            key = (t1, t2)
            if key not in states:
                states[key] = len(raw)
                raw.append({})
                stack.append(key)
            raw[src][a] = states[key]
    return _canonicalize(raw, 0)


def restrict(K: RegularCompact, w: Word) -> Optional[RegularCompact]:
    """Intersection with the cylinder ``[w]``, or None when empty."""
    states: dict[tuple[int, int], int] = {(0, 0): 0}
    raw: RawTrans = [{}]
    stack = [(0, 0)]
    while stack:
        q, i = stack.pop()
        src = states[(q, i)]
        for a, t in K.trans[q]:
            if i < len(w) and a != w[i]:
                continue
            key = (t, min(i + 1, len(w)))
            if key not in states:
                states[key] = len(raw)
                raw.append({})
                stack.append(key)
            raw[src][a] = states[key]
    return _canonicalize(raw, 0)


def subset_witness(K1: RegularCompact, K2: RegularCompact) -> Optional[Word]:
    """None when ``K1 <= K2``; otherwise a shortest prefix of ``K1`` that is
    not a prefix of ``K2`` (the whole cylinder below it escapes ``K2``)."""
    seen = {(0, 0)}
    frontier: list[tuple[int, int, Word]] = [(0, 0, ())]
    while frontier:
        nxt = []
        for q1, q2, w in frontier:
            m2 = dict(K2.trans[q2])
            for a, t1 in sorted(K1.trans[q1]):
                t2 = m2.get(a)
                if t2 is None:
                    return w + (a,)
                if (t1, t2) not in seen:
                    seen.add((t1, t2))
                    nxt.append((t1, t2, w + (a,)))
        frontier = nxt
    return None


def subset_of(K1: RegularCompact, K2: RegularCompact) -> bool:
    return subset_witness(K1, K2) is None


def equals_semantic(K1: RegularCompact, K2: RegularCompact) -> bool:
    """Canonical forms make this structural; kept as the named operation."""
    return K1 == K2


def is_empty(K: Optional[RegularCompact]) -> bool:
    return K is None


# ---------------------------------------------------------------------------
# per-depth data: bound sequence and letter ranges


def _profile(K: RegularCompact) -> tuple[list[frozenset[int]], int, int]:
    """Orbit of the reachable-state-set sequence: (sets, onset, period)."""
    if K._profile is None:
        sets: list[frozenset[int]] = [frozenset({0})]
        index: dict[frozenset[int], int] = {sets[0]: 0}
        while True:
            nxt = frozenset(t for q in sets[-1] for _, t in K.trans[q])
            if nxt in index:
                onset = index[nxt]
                K._profile = (sets, onset, len(sets) - onset)
                break
            index[nxt] = len(sets)
            sets.append(nxt)
    return K._profile  # type: ignore[return-value]


def states_at_depth(K: RegularCompact, n: int) -> frozenset[int]:
    sets, onset, period = _profile(K)
    if n < len(sets):
        return sets[n]
    return sets[onset + (n - onset) % period]


def letters_at_depth(K: RegularCompact, n: int) -> tuple[int, int]:
    """(min, max) coordinate value over all branches at coordinate ``n``."""
    vals = [a for q in states_at_depth(K, n) for a, _ in K.trans[q]]
    return min(vals), max(vals)


def bound_seq(K: RegularCompact, n: int) -> int:
    """``max{|x_n| : x in K} + 1``; always >= 1 and eventually periodic."""
    lo, hi = letters_at_depth(K, n)
    return max(abs(lo), abs(hi)) + 1


def bound_profile(K: RegularCompact) -> tuple[int, int]:
    """(onset, period) after which the per-depth letter data repeats."""
    _, onset, period = _profile(K)
    return onset, period


# ---------------------------------------------------------------------------
# relative interior


def rel_int_empty(B: RegularCompact, C: RegularCompact) -> bool:
    """True iff no cylinder node of ``C`` satisfies ``[p] & C <= B``, i.e.
    the closed set B has empty interior relative to the ambient compact C."""
    memo: dict[tuple[int, int], bool] = {}

    def contained(key: tuple[int, int]) -> bool:
        # does every C-branch from qc stay inside B from qb?
        if key in memo:
            return memo[key]
        local = {key}
        stack = [key]
        ok = True
        while stack and ok:
            c, b = stack.pop()
            mb = dict(B.trans[b])
            for a, tc in C.trans[c]:
                tb = mb.get(a)
                if tb is None:
                    ok = False
                    break
                k2 = (tc, tb)
                if k2 in memo:
                    if not memo[k2]:
                        ok = False
                        break
                elif k2 not in local:
                    local.add(k2)
                    stack.append(k2)
        if ok:
            for k in local:
                memo[k] = True
        else:
            memo[key] = False
        return ok

    seen = {(0, 0)}
    stack = [(0, 0)]
    while stack:
        pair = stack.pop()
        if contained(pair):
            return False
        qc, qb = pair
        mb = dict(B.trans[qb])
        for a, tc in C.trans[qc]:
            tb = mb.get(a)
            if tb is None:
                continue  # this cylinder already escapes B
            if (tc, tb) not in seen:
                seen.add((tc, tb))
                stack.append((tc, tb))
    return True


def subset_of_union(C: RegularCompact, Bs: Sequence[RegularCompact]) -> bool:
    """Exact test that every branch of C lies in the union of the Bs."""
    init = frozenset((i, 0) for i in range(len(Bs)))
    seen = {(0, init)}
    stack: list[tuple[int, frozenset]] = [(0, init)]
    while stack:
        qc, alive = stack.pop()
        for a, tc in C.trans[qc]:
            nxt = frozenset(
                (i, t) for i, qb in alive for bb, t in Bs[i].trans[qb] if bb == a
            )
            if not nxt:
                return False
            if (tc, nxt) not in seen:
                seen.add((tc, nxt))
                stack.append((tc, nxt))
    return True


# ---------------------------------------------------------------------------
# notation


def format_set(K: RegularCompact) -> str:
    return "aut:" + ";".join(
        ",".join(f"{a}->{t}" for a, t in st) for st in K.trans
    )


def format_tree(depth: int, tails: dict[Word, TailSpec]) -> str:
    parts = []
    for leaf in sorted(tails):
        spec = tails[leaf]
        words = "|".join(format_word(w) for w in sorted(spec.words))
        parts.append(f"{format_word(leaf)}:{spec.block_len}:[{words}]")
    return "tree:" + ";".join(parts)


def parse_set(text: str) -> RegularCompact:
    text = text.strip()
    if text.startswith("aut:"):
        raw: RawTrans = []
        for state in text[4:].split(";"):
            edges: dict[int, int] = {}
            if state:
                for edge in state.split(","):
                    a, t = edge.split("->")
                    edges[int(a)] = int(t)
            raw.append(edges)
        out = _canonicalize(raw, 0)
        if out is None:
            raise ValueError("automaton denotes the empty set")
        return out
    if text.startswith("tree:"):
        tails: dict[Word, TailSpec] = {}
        depth = None
        for part in text[5:].split(";"):
            leaf_s, block_s, words_s = part.split(":", 2)
            leaf = parse_word(leaf_s)
            if depth is None:
                depth = len(leaf)
            elif len(leaf) != depth:
                raise ValueError("leaves of unequal length")
            if not (words_s.startswith("[") and words_s.endswith("]")):
                raise ValueError(f"bad tail words {words_s!r}")
            words = frozenset(parse_word(w) for w in words_s[1:-1].split("|"))
            tails[leaf] = TailSpec(int(block_s), words)
        assert depth is not None
        return from_tree(depth, tails)
    raise ValueError(f"unknown set notation {text!r}")
