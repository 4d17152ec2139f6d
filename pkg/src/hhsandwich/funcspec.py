"""Function specifications: expression trees, parsing, random convex families
and grid-based shape checks.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

SHAPE_FLAGS = frozenset({"convex", "concave", "positive", "increasing"})
SHAPE_TARGETS = ("convex", "concave", "positive_convex", "increasing_positive_convex")
FUNCTIONS = {"exp": 1, "log": 1, "sqrt": 1, "abs": 1, "max": 2}

POSITIVE_MARGIN = 0.1


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EvaluationError(ArithmeticError):
    pass


class ShapeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# expression tree


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise ValueError(f"unknown function {self.name!r}")
        if len(self.args) != FUNCTIONS[self.name]:
            raise ValueError(f"{self.name} takes {FUNCTIONS[self.name]} argument(s)")


Node = Union[Const, Var, Neg, BinOp, Call]


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<id>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            off = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[off]!r}", off)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, off = self.take()
        if text != value or kind != "op":
            found = "end of input" if kind == "end" else repr(text)
            raise ParseError(f"expected {value!r}, found {found}", off)

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        base = self.unary()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return BinOp("^", base, self.factor())
        return base

    def unary(self) -> Node:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Node:
        kind, text, off = self.take()
        if kind == "num":
            return Const(float(text))
        if kind == "id":
            if text == "x":
                return Var()
            if text not in FUNCTIONS:
                raise ParseError(f"unknown identifier {text!r}", off)
            self.expect("(")
            args = [self.expr()]
            while self.peek()[:2] == ("op", ","):
                self.take()
                args.append(self.expr())
            close = self.peek()[2]
            self.expect(")")
            if len(args) != FUNCTIONS[text]:
                raise ParseError(
                    f"{text} takes {FUNCTIONS[text]} argument(s), got {len(args)}", close
                )
            return Call(text, tuple(args))
        if (kind, text) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {found}", off)


def parse_expression(text: str) -> Node:
    """Parse ``text`` into an expression tree in the single variable ``x``.

    ``^`` binds tighter than unary minus on its right but not on its left:
    ``-x^2`` parses as ``(-x)^2``, following the grammar
    ``factor := unary ('^' factor)?``.
    """
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    parser = _Parser(text)
    node = parser.expr()
    kind, tok, off = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing {tok!r}", off)
    return node


def to_text(node: Node) -> str:
    """Fully parenthesised text that parses back to an equivalent tree."""
    if isinstance(node, Const):
        s = repr(float(node.value))
        return f"({s})" if s.startswith("-") else s
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return f"(-{to_text(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_text(a) for a in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# evaluation


def _eval_array(node: Node, xs: np.ndarray) -> np.ndarray:
    if isinstance(node, Const):
        return np.float64(node.value)
    if isinstance(node, Var):
        return xs
    if isinstance(node, Neg):
        return -_eval_array(node.arg, xs)
    if isinstance(node, BinOp):
        left = _eval_array(node.left, xs)
        right = _eval_array(node.right, xs)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            if np.any(right == 0.0):
                raise EvaluationError("division by zero")
            return left / right
        if node.op == "^":
            if np.any((left < 0) & (right != np.floor(right))):
                raise EvaluationError("non-integer power of a negative base")
            if np.any((left == 0) & (right < 0)):
                raise EvaluationError("negative power of zero")
            return np.power(left, right)
        raise EvaluationError(f"unknown operator {node.op!r}")
    if isinstance(node, Call):
        args = [_eval_array(a, xs) for a in node.args]
        if node.name == "exp":
            return np.exp(args[0])
        if node.name == "log":
            if np.any(args[0] <= 0):
                raise EvaluationError("log of a nonpositive number")
            return np.log(args[0])
        if node.name == "sqrt":
            if np.any(args[0] < 0):
                raise EvaluationError("sqrt of a negative number")
            return np.sqrt(args[0])
        if node.name == "abs":
            return np.abs(args[0])
        if node.name == "max":
            return np.maximum(args[0], args[1])
    raise TypeError(f"not an expression node: {node!r}")


def _is_affine(node: Node) -> bool:
    def const(n):
        return not any(isinstance(s, Var) for s in _walk(n))

    if const(node) or isinstance(node, Var):
        return True
    if isinstance(node, Neg):
        return _is_affine(node.arg)
    if isinstance(node, BinOp):
        if node.op in "+-":
            return _is_affine(node.left) and _is_affine(node.right)
        if node.op == "*":
            return (const(node.left) and _is_affine(node.right)) or (
                const(node.right) and _is_affine(node.left)
            )
        if node.op == "/":
            return const(node.right) and _is_affine(node.left)
    return False


def _walk(node: Node) -> Iterable[Node]:
    yield node
    if isinstance(node, Neg):
        yield from _walk(node.arg)
    elif isinstance(node, BinOp):
        yield from _walk(node.left)
        yield from _walk(node.right)
    elif isinstance(node, Call):
        for a in node.args:
            yield from _walk(a)


@dataclass(frozen=True)
class FunctionSpec:
    """An expression in ``x`` plus the shape properties the caller vouches for."""

    body: Node
    declared_shape: frozenset = frozenset()
    label: str = ""

    def __post_init__(self):
        shape = frozenset(self.declared_shape)
        unknown = shape - SHAPE_FLAGS
        if unknown:
            raise ValueError(f"unknown shape flags {sorted(unknown)}")
        if {"convex", "concave"} <= shape and not _is_affine(self.body):
            raise ShapeError("only an affine function may be declared both convex and concave")
        object.__setattr__(self, "declared_shape", shape)
        if not self.label:
            object.__setattr__(self, "label", to_text(self.body))

    @classmethod
    def from_text(cls, text: str, shape: Iterable[str] = (), label: str = "") -> "FunctionSpec":
        return cls(parse_expression(text), frozenset(shape), label or text)

    @property
    def is_convex(self) -> bool:
        return "convex" in self.declared_shape

    @property
    def is_concave(self) -> bool:
        return "concave" in self.declared_shape

    def values(self, xs) -> np.ndarray:
        """Evaluate at every point of ``xs``; raises EvaluationError on any domain fault."""
        xs = np.asarray(xs, dtype=float)
        with np.errstate(all="ignore"):
            out = _eval_array(self.body, xs)
        out = np.broadcast_to(out, xs.shape).astype(float, copy=False)
        if not np.all(np.isfinite(out)):
            raise EvaluationError(f"non-finite value of {self.label}")
        return out

    def __call__(self, x: float) -> float:
        return evaluate(self, x)

    def negated(self) -> "FunctionSpec":
        swap = {"convex": "concave", "concave": "convex"}
        shape = frozenset(swap.get(s, s) for s in self.declared_shape if s in swap)
        return FunctionSpec(Neg(self.body), shape, f"-({self.label})")


def evaluate(f: FunctionSpec, x: float) -> float:
    if not math.isfinite(x):
        raise EvaluationError("evaluation point must be finite")
    return float(f.values(np.array([x], dtype=float))[0])


# ---------------------------------------------------------------------------
# random convex family


@dataclass(frozen=True)
class ConvexGeneratorConfig:
    seed: int = 0
    hinge_count_range: tuple = (0, 4)
    hinge_weight_range: tuple = (0.0, 2.0)
    quadratic_coeff_range: tuple = (0.0, 1.0)
    affine_slope_range: tuple = (-2.0, 2.0)
    affine_intercept_range: tuple = (-1.0, 1.0)
    shape_target: str = "convex"

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be unsigned")
        for name in (
            "hinge_count_range",
            "hinge_weight_range",
            "quadratic_coeff_range",
            "affine_slope_range",
            "affine_intercept_range",
        ):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ValueError(f"{name} must be ordered, got {(lo, hi)}")
        if self.hinge_count_range[0] < 0:
            raise ValueError("hinge counts must be nonnegative")
        if self.hinge_weight_range[0] < 0 or self.quadratic_coeff_range[0] < 0:
            raise ValueError("hinge weights and quadratic coefficient must be nonnegative")
        if self.shape_target not in SHAPE_TARGETS:
            raise ValueError(f"shape_target must be one of {SHAPE_TARGETS}")


@dataclass(frozen=True)
class ConvexCoefficients:
    """c0 + c1*x + q*x^2 + sum_i w_i*max(0, x - k_i), times ``sign``."""

    c0: float
    c1: float
    q: float
    weights: tuple = ()
    knots: tuple = ()
    sign: float = 1.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        v = self.c0 + self.c1 * x + self.q * x * x
        for w, k in zip(self.weights, self.knots):
            v = v + w * np.maximum(0.0, x - k)
        return self.sign * v

    def tree(self) -> Node:
        node: Node = BinOp(
            "+",
            BinOp("+", Const(self.c0), BinOp("*", Const(self.c1), Var())),
            BinOp("*", Const(self.q), BinOp("^", Var(), Const(2.0))),
        )
        for w, k in zip(self.weights, self.knots):
            hinge = Call("max", (Const(0.0), BinOp("-", Var(), Const(k))))
            node = BinOp("+", node, BinOp("*", Const(w), hinge))
        return Neg(node) if self.sign < 0 else node

    def minimum(self, a: float, b: float) -> float:
        """Exact minimum over [a, b] of the unsigned (convex) part."""
        breaks = sorted(k for k in self.knots if a < k < b)
        candidates = [a, b, *breaks]
        edges = [a, *breaks, b]
        if self.q > 0:
            for lo, hi in zip(edges[:-1], edges[1:]):
                mid = 0.5 * (lo + hi)
                slope = self.c1 + sum(w for w, k in zip(self.weights, self.knots) if k < mid)
                vertex = -slope / (2.0 * self.q)
                if lo < vertex < hi:
                    candidates.append(vertex)
        unsigned = ConvexCoefficients(self.c0, self.c1, self.q, self.weights, self.knots)
        return float(min(unsigned(c) for c in candidates))


@dataclass(frozen=True)
class GeneratedFunction(FunctionSpec):
    coefficients: ConvexCoefficients = field(default=None, compare=False)


def generate_convex(config: ConvexGeneratorConfig, interval) -> GeneratedFunction:
    """Draw a member of the hinge-plus-quadratic family on ``interval``.

    All randomness comes from ``numpy.random.default_rng(config.seed)`` in a
    fixed draw order, so equal inputs give equal coefficients.
    """
    a, b = float(interval.a), float(interval.b)
    rng = np.random.default_rng(config.seed)
    k_lo, k_hi = config.hinge_count_range
    count = int(rng.integers(k_lo, k_hi + 1))
    weights = tuple(float(w) for w in rng.uniform(*config.hinge_weight_range, size=count))
    knots = tuple(float(k) for k in rng.uniform(a, b, size=count))
    q = float(rng.uniform(*config.quadratic_coeff_range))
    c1 = float(rng.uniform(*config.affine_slope_range))
    c0 = float(rng.uniform(*config.affine_intercept_range))
    target = config.shape_target

    if target == "increasing_positive_convex":
        # slope at a is the smallest slope on [a, b]; hinges only add to it
        c1 = abs(c1) + max(0.0, -2.0 * q * a)
    coeffs = ConvexCoefficients(c0, c1, q, weights, knots)
    if target in ("positive_convex", "increasing_positive_convex"):
        low = coeffs.minimum(a, b)
        if low < POSITIVE_MARGIN:
            coeffs = ConvexCoefficients(c0 + (POSITIVE_MARGIN - low), c1, q, weights, knots)

    flags = {
        "convex": {"convex"},
        "concave": {"concave"},
        "positive_convex": {"convex", "positive"},
        "increasing_positive_convex": {"convex", "positive", "increasing"},
    }[target]
    if target == "concave":
        coeffs = ConvexCoefficients(c0, c1, q, weights, knots, sign=-1.0)
    label = f"{target}[seed={config.seed}]"
    return GeneratedFunction(coeffs.tree(), frozenset(flags), label, coefficients=coeffs)


# ---------------------------------------------------------------------------
# shape checks


@dataclass(frozen=True)
class PredicateResult:
    passed: bool
    counterexample: tuple | None = None  # points witnessing the failure


@dataclass(frozen=True)
class ShapeReport:
    convex: PredicateResult
    concave: PredicateResult
    positive: PredicateResult
    increasing: PredicateResult

    def satisfies(self, flags: Iterable[str]) -> bool:
        return all(getattr(self, flag).passed for flag in flags)


def _midpoint_convex(vals: np.ndarray, half: np.ndarray, grid: np.ndarray, tol: float):
    # half[i + k] is f at (grid[i] + grid[k]) / 2
    n = len(vals)
    idx = np.arange(n)
    excess = half[idx[:, None] + idx[None, :]] - 0.5 * (vals[:, None] + vals[None, :])
    worst = np.unravel_index(np.argmax(excess), excess.shape)
    if excess[worst] > tol:
        i, k = worst
        return PredicateResult(False, (float(grid[i]), float(grid[k])))
    return PredicateResult(True)


def check_shape(f: FunctionSpec, interval, grid_points: int = 101, tol: float = 1e-12) -> ShapeReport:
    if grid_points < 3:
        raise ValueError("grid_points must be at least 3")
    a, b = float(interval.a), float(interval.b)
    half_grid = np.linspace(a, b, 2 * grid_points - 1)
    half = f.values(half_grid)
    grid = half_grid[::2]
    vals = half[::2]

    convex = _midpoint_convex(vals, half, grid, tol)
    concave = _midpoint_convex(-vals, -half, grid, tol)

    bad = np.flatnonzero(vals < -tol)
    positive = PredicateResult(True) if bad.size == 0 else PredicateResult(False, (float(grid[bad[0]]),))

    drops = np.flatnonzero(vals[1:] < vals[:-1] - tol)
    if drops.size == 0:
        increasing = PredicateResult(True)
    else:
        i = drops[0]
        increasing = PredicateResult(False, (float(grid[i]), float(grid[i + 1])))
    return ShapeReport(convex, concave, positive, increasing)

