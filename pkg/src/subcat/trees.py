"""Bracketed constituency trees: data type, reader and writer.

The reader accepts Penn-style s-expressions, several per document, with
blank lines and ``;`` comment lines between trees.  A leaf is a tagged
token ``(TAG token)``.  The PTB convention of wrapping each tree in an
unlabelled pair of brackets, ``( (S ...) )``, is accepted and unwrapped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from subcat.errors import EmptyTree, LeafWithoutTag, TreebankParseError, UnbalancedBrackets

_SPECIAL = "()"


@dataclass(frozen=True)
class TreeNode:
    label: str
    children: tuple["TreeNode", ...] = ()
    token: str | None = None

    def __post_init__(self):
        if not self.label or any(c.isspace() or c in _SPECIAL for c in self.label):
            raise ValueError(f"invalid label {self.label!r}")
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))
        if (self.token is None) == (not self.children):
            raise ValueError("a node has either a token or children, not both or neither")

    @classmethod
    def leaf(cls, tag: str, token: str) -> "TreeNode":
        return cls(tag, (), token)

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    @property
    def is_preterminal_group(self) -> bool:
        """True for an internal node whose children are all leaves."""
        return bool(self.children) and all(c.is_leaf for c in self.children)

    def node_count(self) -> int:
        return 1 + sum(c.node_count() for c in self.children)

    def depth(self) -> int:
        if self.is_leaf:
            return 1
        return 1 + max(c.depth() for c in self.children)

    def leaves(self) -> Iterator["TreeNode"]:
        if self.is_leaf:
            yield self
        else:
            for child in self.children:
                yield from child.leaves()

    def subtrees(self, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], "TreeNode"]]:
        """Pre-order walk yielding ``(path, node)`` pairs."""
        stack = [(path, self)]
        while stack:
            p, node = stack.pop()
            yield p, node
            for i in range(len(node.children) - 1, -1, -1):
                stack.append((p + (i,), node.children[i]))

    def at(self, path: Sequence[int]) -> "TreeNode":
        node = self
        for i in path:
            node = node.children[i]
        return node

    def __str__(self) -> str:
        return serialize(self)


def serialize(tree: TreeNode) -> str:
    """Single-line canonical bracketing."""
    parts: list[str] = []

    def walk(node: TreeNode) -> None:
        if node.is_leaf:
            parts.append(f"({node.label} {node.token})")
            return
        parts.append(f"({node.label}")
        for child in node.children:
            parts.append(" ")
            walk(child)
        parts.append(")")

    walk(tree)
    return "".join(parts)


def serialize_all(trees: Sequence[TreeNode]) -> str:
    return "".join(serialize(t) + "\n" for t in trees)


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.line_starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                self.line_starts.append(i + 1)

    def where(self, offset: int) -> dict:
        lo, hi = 0, len(self.line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.line_starts[mid] <= offset:
                lo = mid
            else:
                hi = mid - 1
        return {"offset": offset, "line": lo + 1, "column": offset - self.line_starts[lo] + 1}

    def tokens(self) -> Iterator[tuple[str, int]]:
        """Yields ``(token, offset)``; skips comments at bracket depth zero."""
        text = self.text
        n = len(text)
        i = 0
        depth = 0
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch == ";" and depth == 0:
                end = text.find("\n", i)
                i = n if end < 0 else end + 1
            elif ch == "(":
                depth += 1
                yield "(", i
                i += 1
            elif ch == ")":
                depth -= 1
                yield ")", i
                i += 1
            else:
                j = i
                while j < n and not text[j].isspace() and text[j] not in _SPECIAL:
                    j += 1
                yield text[i:j], i
                i = j

    def read(self) -> list[TreeNode]:
        trees: list[TreeNode] = []
        # each frame: [label, label_offset, open_offset, children, tokens]
        stack: list[list] = []
        for tok, off in self.tokens():
            if tok == "(":
                stack.append([None, None, off, [], []])
            elif tok == ")":
                if not stack:
                    raise UnbalancedBrackets("unexpected ')'", **self.where(off))
                node = self._close(stack.pop())
                if stack:
                    parent = stack[-1]
                    if parent[4]:
                        raise LeafWithoutTag(f"untagged token {parent[4][0][0]!r}",
                                             **self.where(parent[4][0][1]))
                    parent[3].append(node)
                elif node is not None:
                    trees.append(node)
            else:
                if not stack:
                    raise LeafWithoutTag(f"token {tok!r} outside any bracket", **self.where(off))
                frame = stack[-1]
                if frame[0] is None and not frame[3]:
                    frame[0], frame[1] = tok, off
                else:
                    if frame[3] or frame[4]:
                        raise LeafWithoutTag(f"untagged token {tok!r}", **self.where(off))
                    frame[4].append((tok, off))
        if stack:
            raise UnbalancedBrackets(f"{len(stack)} unclosed '('", **self.where(len(self.text)))
        return trees

    def _close(self, frame: list) -> TreeNode | None:
        label, _, open_off, children, tokens = frame
        if label is None:
            # PTB-style anonymous wrapper
            if len(children) == 1:
                return children[0]
            if not children:
                raise EmptyTree("empty brackets", **self.where(open_off))
            raise EmptyTree("unlabelled node with several children", **self.where(open_off))
        if tokens:
            return TreeNode(label, (), tokens[0][0])
        if not children:
            raise EmptyTree(f"constituent {label!r} has no children", **self.where(open_off))
        return TreeNode(label, tuple(children))


def parse_bracketed(text: str) -> list[TreeNode]:
    """Parse every top-level tree in ``text``, in document order.

    Raises UnbalancedBrackets, EmptyTree or LeafWithoutTag with the
    offending offset, line and column.
    """
    return _Reader(text).read()


def read_treebank(path) -> list[TreeNode]:
    with open(path, encoding="utf-8") as f:
        text = f.read()
    try:
        return parse_bracketed(text)
    except TreebankParseError as e:
        raise e.with_source(str(path))
