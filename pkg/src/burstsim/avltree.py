"""Height-balanced binary search tree used for buffered-write metadata."""

from __future__ import annotations

from typing import Any, Iterator


class _Node:
    __slots__ = ("key", "value", "left", "right", "height")

    def __init__(self, key, value):
        self.key = key
        self.value = value
        self.left: _Node | None = None
        self.right: _Node | None = None
        self.height = 1


def _h(node: _Node | None) -> int:
    return node.height if node is not None else 0


def _fix(node: _Node) -> None:
    node.height = 1 + max(_h(node.left), _h(node.right))


def _rotate_right(y: _Node) -> _Node:
    x = y.left
    y.left = x.right
    x.right = y
    _fix(y)
    _fix(x)
    return x


def _rotate_left(x: _Node) -> _Node:
    y = x.right
    x.right = y.left
    y.left = x
    _fix(x)
    _fix(y)
    return y


def _rebalance(node: _Node) -> _Node:
    _fix(node)
    bal = _h(node.left) - _h(node.right)
    if bal > 1:
        if _h(node.left.left) < _h(node.left.right):
            node.left = _rotate_left(node.left)
        return _rotate_right(node)
    if bal < -1:
        if _h(node.right.right) < _h(node.right.left):
            node.right = _rotate_right(node.right)
        return _rotate_left(node)
    return node


class AVLTree:
    """Ordered map; inserting an existing key replaces its value."""

    def __init__(self):
        self.root: _Node | None = None
        self._len = 0

    def __len__(self) -> int:
        return self._len

    def __bool__(self) -> bool:
        return self._len > 0

    @property
    def height(self) -> int:
        return _h(self.root)

    def insert(self, key, value: Any) -> bool:
        """Insert or replace; returns True if the key was new."""
        # iterative descent with an explicit path keeps deep trees off the
        # recursion limit
        path: list[tuple[_Node, bool]] = []
        node = self.root
        while node is not None:
            if key == node.key:
                node.value = value
                return False
            went_left = key < node.key
            path.append((node, went_left))
            node = node.left if went_left else node.right

        child = _Node(key, value)
        self._len += 1
        for parent, went_left in reversed(path):
            if went_left:
                parent.left = child
            else:
                parent.right = child
            child = _rebalance(parent)
        self.root = child
        return True

    def get(self, key, default=None):
        node = self.root
        while node is not None:
            if key == node.key:
                return node.value
            node = node.left if key < node.key else node.right
        return default

    def __contains__(self, key) -> bool:
        return self.get(key, _MISSING) is not _MISSING

    def items(self) -> Iterator[tuple[Any, Any]]:
        """In-order traversal."""
        stack: list[_Node] = []
        node = self.root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node.key, node.value
            node = node.right

    def keys(self) -> Iterator[Any]:
        return (k for k, _ in self.items())

    def values(self) -> Iterator[Any]:
        return (v for _, v in self.items())

    def clear(self) -> None:
        self.root = None
        self._len = 0

    def check(self) -> None:
        """Raise AssertionError if ordering, heights or balance are broken."""

        def walk(node, lo, hi) -> int:
            if node is None:
                return 0
            assert lo is None or lo < node.key, "order violated"
            assert hi is None or node.key < hi, "order violated"
            lh = walk(node.left, lo, node.key)
            rh = walk(node.right, node.key, hi)
            assert abs(lh - rh) <= 1, f"unbalanced at {node.key!r}"
            assert node.height == 1 + max(lh, rh), f"stale height at {node.key!r}"
            return node.height

        walk(self.root, None, None)


_MISSING = object()
