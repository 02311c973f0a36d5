"""Symbol-level annealing.

A product is a chain ``f1 f2 ... fm`` of sense fragments (repetition allowed)
in which every junction between consecutive fragments is straddled by an
occurrence of some splint's sequence inside the product.  Annealing returns
the *maximal* feasible chains: those that are not a proper contiguous
sub-chain of another feasible chain.

Whether a junction can still be covered depends only on the last ``L - 1``
symbols of a partial product (``L`` being the longest splint), so partial
products collapse onto a finite set of frontier states.  That gives cycle
detection for free and makes "can this chain still be extended" a finite
reachability question, and a cycle among states that can still finish
means products of unbounded length.  For a chain of at least ``L - 1`` symbols, left and
right extension are independent, which is what the enumeration below uses to
prune every subtree whose prefix can be extended to the left.
"""

from __future__ import annotations

from collections import Counter, deque

from .errors import NonTerminating, StrandExplosion
from .tube import Duplex

# enumeration gives up once it has visited this many partial chains per allowed product
NODE_BUDGET_FACTOR = 40


class _Frontier:
    """Right-extension automaton over a fixed fragment/splint set."""

    def __init__(self, fragments, splints, reach):
        self.fragments = fragments
        self.reach = reach  # L - 1
        self.by_last = {}
        for s in splints:
            self.by_last.setdefault(s[-1], []).append(s)
        self._succ = {}
        self._ext = {}

    def start(self, fragment):
        return (fragment[-self.reach:], len(fragment) <= self.reach, ())

    def step(self, state, fragment):
        tail, whole, pending = state
        buf = tail + fragment
        base = len(tail)
        size = len(buf)
        open_j = [base - off for off in pending]
        open_j.append(base)
        for e in range(base + 1, size + 1):
            if not open_j:
                break
            for s in self.by_last.get(buf[e - 1], ()):
                p = e - len(s)
                if p >= 0 and buf[p:e] == s:
                    open_j = [j for j in open_j if not p < j < e]
        for j in open_j:
            if size - j >= self.reach:
                return None
        return (buf[-self.reach:], whole and size <= self.reach, tuple(sorted(size - j for j in open_j)))

    def successors(self, state):
        try:
            return self._succ[state]
        except KeyError:
            pass
        out = []
        for idx, frag in enumerate(self.fragments):
            nxt = self.step(state, frag)
            if nxt is not None:
                out.append((idx, nxt))
        self._succ[state] = out
        return out

    def live_states(self, starts) -> set:
        """States reachable from ``starts`` that can still end in a fully covered chain.

        Raises :class:`NonTerminating` if those states contain a cycle, since
        pumping it yields covered chains of every length.
        """
        seen = set(starts)
        queue = deque(starts)
        back = {}
        while queue:
            state = queue.popleft()
            for _, nxt in self.successors(state):
                back.setdefault(nxt, set()).add(state)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        live = {st for st in seen if not st[2]}
        queue = deque(live)
        while queue:
            for prev in back.get(queue.popleft(), ()):
                if prev not in live:
                    live.add(prev)
                    queue.append(prev)
        # Kahn's algorithm on the live subgraph
        indegree = {st: 0 for st in live}
        for st in live:
            for _, nxt in self.successors(st):
                if nxt in live:
                    indegree[nxt] += 1
        queue = deque(st for st, d in indegree.items() if d == 0)
        removed = 0
        while queue:
            st = queue.popleft()
            removed += 1
            for _, nxt in self.successors(st):
                if nxt in live:
                    indegree[nxt] -= 1
                    if indegree[nxt] == 0:
                        queue.append(nxt)
        if removed < len(live):
            raise NonTerminating("splint-covered assemblies can grow without bound")
        return live

    def can_extend(self, state) -> bool:
        """True if appending one or more fragments can reach a fully covered chain."""
        if state in self._ext:
            return self._ext[state]
        seen = {state}
        queue = deque([state])
        found = False
        while queue and not found:
            for _, nxt in self.successors(queue.popleft()):
                if not nxt[2]:
                    found = True
                    break
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        self._ext[state] = found
        return found


def _junction_splints(chain, fragments, by_last):
    """Leftmost splint occurrence covering each junction, deduplicated, in position order."""
    product = ()
    junctions = []
    for idx in chain:
        if product:
            junctions.append(len(product))
        product += fragments[idx]
    occurrences = []
    for e in range(2, len(product) + 1):
        for s in by_last.get(product[e - 1], ()):
            p = e - len(s)
            if p >= 0 and product[p:e] == s:
                occurrences.append((p, s))
    occurrences.sort()
    junction_set = set(junctions)
    chosen = {}
    for p, s in occurrences:
        for j in range(p + 1, p + len(s)):
            if j in junction_set and j not in chosen:
                chosen[j] = (p, s)
    used = sorted(set(chosen.values()))
    return product, tuple(s for _, s in used)


def assemble(fragments, splints, cap: int) -> Counter:
    """Return a counter of :class:`Duplex` products, one copy per distinct product."""
    frags = sorted(set(tuple(f) for f in fragments))
    # a splint shorter than two symbols cannot straddle a junction
    active = sorted(set(tuple(s) for s in splints if len(s) >= 2))
    if not frags:
        return Counter()
    reach = max((len(s) for s in active), default=1) - 1
    reach = max(reach, 1)
    right = _Frontier(frags, active, reach)
    left = _Frontier([f[::-1] for f in frags], [s[::-1] for s in active], reach)
    left_ext = {}

    def left_extendable(context):
        if context not in left_ext:
            left_ext[context] = left.can_extend((context[::-1], False, ()))
        return left_ext[context]

    budget = NODE_BUDGET_FACTOR * max(cap, 1)
    visited = 0
    long_max = []
    short = []

    live = right.live_states([right.start(f) for f in frags])
    for first in range(len(frags)):
        start = right.start(frags[first])
        if start not in live:
            continue
        todo = [((first,), frags[first], start, False)]
        while todo:
            chain, prod, state, checked = todo.pop()
            visited += 1
            if visited > budget:
                raise StrandExplosion(f"annealing explored more than {budget} partial assemblies")
            if not checked and len(prod) >= reach:
                if left_extendable(prod[:reach]):
                    continue
                checked = True
            if not state[2]:
                if len(prod) >= reach:
                    if not right.can_extend(state):
                        long_max.append(chain)
                        if len(long_max) > cap:
                            raise StrandExplosion(f"annealing would yield more than {cap} products")
                else:
                    short.append(chain)
            for idx, nxt in reversed(right.successors(state)):
                if nxt in live:
                    todo.append((chain + (idx,), prod + frags[idx], nxt, checked))

    maximal = list(long_max)
    if short:
        # a short chain is maximal unless it sits inside a longer maximal chain
        short.sort(key=lambda c: (-len(c), c))
        pending = set(short)
        widths = sorted({len(c) for c in short})
        for chain in maximal:
            if not pending:
                break
            for w in widths:
                if w >= len(chain):
                    continue
                for i in range(len(chain) - w + 1):
                    pending.discard(chain[i:i + w])
        for chain in short:
            if chain in pending:
                inside = any(
                    len(other) > len(chain) and any(other[i:i + len(chain)] == chain
                                                    for i in range(len(other) - len(chain) + 1))
                    for other in maximal
                )
                if not inside:
                    maximal.append(chain)

    out = Counter()
    seen = set()
    for chain in maximal:
        product, used = _junction_splints(chain, frags, right.by_last)
        if product in seen:
            continue
        seen.add(product)
        out[Duplex(product, used)] = 1
    if len(out) > cap:
        raise StrandExplosion(f"annealing would yield more than {cap} products")
    return out
