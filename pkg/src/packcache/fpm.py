"""Incremental FP-tree over pair transactions and frequent-pair queries.

Every transaction has exactly two items, so the tree never grows deeper
than two levels below the root. Items are ordered by ascending id; with
two-item transactions the order has no effect on path sharing, and a fixed
order means an insertion never has to restructure the tree.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

Pair = Tuple[int, int]


def normalize_pair(pair) -> Pair:
    a, b = (int(x) for x in pair)
    if a == b:
        raise ValueError(f"a pair needs two distinct items, got ({a}, {b})")
    return (a, b) if a < b else (b, a)


def supports(count: int, txn_count: int, gamma: float) -> bool:
    """The shared support rule: ``count / txn_count >= gamma``."""
    return txn_count > 0 and count / txn_count >= gamma


class FpNode:
    __slots__ = ("item", "count", "parent", "children", "link")

    def __init__(self, item: Optional[int], parent: Optional["FpNode"]):
        self.item = item
        self.count = 0
        self.parent = parent
        self.children: Dict[int, FpNode] = {}
        # next node carrying the same item, threaded from the header table
        self.link: Optional[FpNode] = None

    @property
    def is_root(self) -> bool:
        return self.item is None

    def __repr__(self):
        return f"FpNode(item={self.item}, count={self.count})"


class _HeaderEntry:
    __slots__ = ("head", "tail", "count")

    def __init__(self):
        self.head: Optional[FpNode] = None
        self.tail: Optional[FpNode] = None
        self.count = 0


@dataclass(frozen=True)
class FrequentSet:
    """Pairs whose support met the threshold over ``basis_txn_count`` transactions."""

    pairs: FrozenSet[Pair] = frozenset()
    basis_txn_count: int = 0

    def __contains__(self, pair) -> bool:
        try:
            return normalize_pair(pair) in self.pairs
        except ValueError:
            return False

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))


EMPTY = FrequentSet()


def is_frequent(freq: FrequentSet, pair) -> bool:
    return pair in freq


class FpTree:
    """Prefix tree with a header table of per-item node-link chains."""

    def __init__(self):
        self.root = FpNode(None, None)
        self.header: Dict[int, _HeaderEntry] = {}
        self.txn_count = 0
        self.node_count = 1
        self._cache: Optional[Tuple[int, float, FrequentSet]] = None

    def insert_transaction(self, pair) -> "FpTree":
        """Add one pair transaction; returns ``self`` so calls can be chained."""
        path = normalize_pair(pair)
        node = self.root
        for item in path:
            child = node.children.get(item)
            if child is None:
                child = FpNode(item, node)
                node.children[item] = child
                self.node_count += 1
                entry = self.header.get(item)
                if entry is None:
                    entry = self.header[item] = _HeaderEntry()
                if entry.tail is None:
                    entry.head = child
                else:
                    entry.tail.link = child
                entry.tail = child
            child.count += 1
            self.header[item].count += 1
            node = child
        self.txn_count += 1
        self._cache = None
        return self

    def item_nodes(self, item: int):
        entry = self.header.get(item)
        node = entry.head if entry else None
        while node is not None:
            yield node
            node = node.link

    def pair_counts(self) -> Dict[Pair, int]:
        """Occurrence count of each pair, read off the conditional pattern bases.

        For the later item of a pair, each node in its chain has a one-item
        prefix path (its parent) whose count is the pair count.
        """
        counts: Dict[Pair, int] = {}
        for item in self.header:
            for node in self.item_nodes(item):
                parent = node.parent
                if parent is not None and not parent.is_root:
                    counts[(parent.item, item)] = node.count
        return counts

    def mine_frequent_pairs(self, gamma: float) -> FrequentSet:
        if self._cache is not None and self._cache[0] == self.txn_count and self._cache[1] == gamma:
            return self._cache[2]
        n = self.txn_count
        pairs = frozenset(p for p, c in self.pair_counts().items() if supports(c, n, gamma))
        result = FrequentSet(pairs, n)
        self._cache = (n, gamma, result)
        return result

    def check(self):
        """Assert the structural invariants; used by the tests."""
        for item, entry in self.header.items():
            assert sum(n.count for n in self.item_nodes(item)) == entry.count, item
        assert self.txn_count == sum(c.count for c in self.root.children.values())
        stack = [self.root]
        while stack:
            node = stack.pop()
            for item, child in node.children.items():
                assert child.item == item and child.parent is node
                if not node.is_root:
                    assert node.item < item, "path order violated"
                stack.append(child)
        assert self.node_count <= 1 + 2 * self.txn_count


def insert_transaction(tree: FpTree, pair) -> FpTree:
    return tree.insert_transaction(pair)


def mine_frequent_pairs(tree: FpTree, gamma: float) -> FrequentSet:
    return tree.mine_frequent_pairs(gamma)


def naive_frequent_pairs(history: Iterable, gamma: float) -> FrequentSet:
    """Brute-force oracle: count every pair directly."""
    history = [normalize_pair(p) for p in history]
    n = len(history)
    counts = Counter(history)
    return FrequentSet(frozenset(p for p, c in counts.items() if supports(c, n, gamma)), n)
