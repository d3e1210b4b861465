"""Shape recognition for simply laced Dynkin diagrams and their affine extensions."""

from __future__ import annotations

from typing import Sequence

from .lattice import ADEType

Adjacency = Sequence[set[int]]


def _arms(adj: Adjacency, center: int) -> list[int] | None:
    """Lengths of the paths hanging off ``center``; None if any arm branches."""
    lengths = []
    for start in adj[center]:
        prev, cur, length = center, start, 1
        while True:
            nbrs = adj[cur] - {prev}
            if not nbrs:
                break
            if len(nbrs) > 1:
                return None
            prev, cur = cur, next(iter(nbrs))
            length += 1
        lengths.append(length)
    return sorted(lengths)


def _is_connected(adj: Adjacency) -> bool:
    n = len(adj)
    if n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def finite_type(adj: Adjacency) -> ADEType | None:
    """ADE type of a connected simple graph, or None if it is not a Dynkin diagram."""
    n = len(adj)
    if not _is_connected(adj):
        return None
    if sum(len(a) for a in adj) != 2 * (n - 1):
        return None
    deg = [len(a) for a in adj]
    if max(deg, default=0) <= 2:
        return ADEType("A", n)
    branch = [v for v in range(n) if deg[v] >= 3]
    if len(branch) != 1 or deg[branch[0]] != 3:
        return None
    arms = _arms(adj, branch[0])
    if arms is None:
        return None
    if arms[0] == 1 and arms[1] == 1:
        return ADEType("D", n)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return ADEType("E", n)
    return None


def affine_kodaira_type(adj: Adjacency, double_pair: bool = False) -> str | None:
    """Kodaira symbol of an extended Dynkin diagram with at least two vertices.

    ``double_pair`` marks two vertices joined by an edge of weight 2, which is
    the extended ``A1`` diagram (type ``I2``).
    """
    n = len(adj)
    if double_pair:
        return "I2" if n == 2 else None
    if not _is_connected(adj):
        return None
    deg = [len(a) for a in adj]
    edges = sum(deg) // 2
    if edges == n:
        return f"I{n}" if n >= 3 and all(d == 2 for d in deg) else None
    if edges != n - 1:
        return None
    branch = [v for v in range(n) if deg[v] >= 3]
    if len(branch) == 1:
        c = branch[0]
        if deg[c] == 4:
            return "I0*" if n == 5 else None
        arms = _arms(adj, c)
        if arms == [2, 2, 2]:
            return "IV*"
        if arms == [1, 3, 3]:
            return "III*"
        if arms == [1, 2, 5]:
            return "II*"
        return None
    if len(branch) == 2 and all(deg[b] == 3 for b in branch):
        for b in branch:
            if sum(1 for w in adj[b] if deg[w] == 1) != 2:
                return None
        if max(deg) > 3:
            return None
        return f"I{n - 5}*"
    return None


def kodaira_root_type(symbol: str) -> ADEType:
    """Finite ADE type obtained by deleting one multiplicity-one component."""
    if symbol == "II*":
        return ADEType("E", 8)
    if symbol == "III*":
        return ADEType("E", 7)
    if symbol == "IV*":
        return ADEType("E", 6)
    if symbol.endswith("*"):
        return ADEType("D", int(symbol[1:-1]) + 4)
    return ADEType("A", int(symbol[1:]) - 1)


def kodaira_multiplicities(symbol: str) -> list[int]:
    """Sorted multiplicity multiset of the standard fibre of this type."""
    if symbol == "II*":
        m = [1, 2, 3, 4, 5, 6, 4, 2, 3]
    elif symbol == "III*":
        m = [1, 2, 3, 4, 3, 2, 1, 2]
    elif symbol == "IV*":
        m = [1, 2, 3, 2, 1, 2, 1]
    elif symbol.endswith("*"):
        k = int(symbol[1:-1])
        m = [1, 1, 1, 1] + [2] * (k + 1)
    else:
        m = [1] * int(symbol[1:])
    return sorted(m)


def isomorphism(adj_a: Adjacency, adj_b: Adjacency) -> list[int] | None:
    """A vertex bijection ``a -> b`` preserving adjacency, by backtracking.

    Intended for trees with at most a few dozen vertices; candidates are
    tried in index order so the result is deterministic.
    """
    n = len(adj_a)
    if n != len(adj_b):
        return None
    deg_a = [len(x) for x in adj_a]
    deg_b = [len(x) for x in adj_b]
    if sorted(deg_a) != sorted(deg_b):
        return None
    order = _bfs_order(adj_a)
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def ok(v, w):
        if deg_a[v] != deg_b[w]:
            return False
        for u, x in mapping.items():
            if (u in adj_a[v]) != (x in adj_b[w]):
                return False
        return True

    def rec(i):
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if w not in used and ok(v, w):
                mapping[v] = w
                used.add(w)
                if rec(i + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    if not rec(0):
        return None
    return [mapping[v] for v in range(n)]


def _bfs_order(adj: Adjacency) -> list[int]:
    n = len(adj)
    order: list[int] = []
    seen: set[int] = set()
    for s in range(n):
        if s in seen:
            continue
        seen.add(s)
        queue = [s]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(adj[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def adjacency_from_gram(gram: Sequence[Sequence[int]]) -> list[set[int]]:
    n = len(gram)
    return [{j for j in range(n) if j != i and gram[i][j] != 0} for i in range(n)]
