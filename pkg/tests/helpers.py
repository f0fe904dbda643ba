"""Shared test utilities: independent oracles and corpus generators."""

from __future__ import annotations

import itertools
import math

import numpy as np

from poisson_grad import Field, GridSpec
from poisson_grad.expr import BinOp, Call, Const, Neg, Var


def random_field(spec: GridSpec, rng, low: float = 0.0, high: float = 1.0) -> Field:
    return Field(spec, rng.uniform(low, high, spec.shape))


def gaussian_field(spec: GridSpec, rng, scale: float = 1.0) -> Field:
    return Field(spec, scale * rng.standard_normal(spec.shape))


def action_fsum_oracle(field: Field, pot) -> float:
    """Action recomputed from scratch: explicit node loops, math.fsum
    accumulation, scalar potential calls.  Independent of the action module."""
    spec = field.spec
    terms = []
    for idx in itertools.product(*(range(k) for k in spec.nodes)):
        t = np.array([k * h for k, h in zip(idx, spec.spacings)])
        x = field.values[idx]
        kin = 0.0
        for axis in range(spec.p):
            neighbor = list(idx)
            neighbor[axis] = (neighbor[axis] + 1) % spec.nodes[axis]
            diff = (field.values[tuple(neighbor)] - x) / spec.spacings[axis]
            kin += 0.5 * float(np.dot(diff, diff))
        terms.append(kin + float(pot.value(t, x)))
    return spec.cell_volume * math.fsum(terms)


# ---------------------------------------------------------------------------
# seeded expression corpus
#
# Shapes are chosen so values and low-order derivatives stay O(10): division
# only by offsets bounded away from zero, exp only of damped arguments, sqrt
# only of 1 + (.)^2, integer powers only of bounded subtrees.  That keeps the
# central-difference probe of the dual-number gradients accurate to ~1e-9.

def _bounded(rng, p: int, n: int, depth: int):
    """Subtree with values in roughly [-2, 2]."""
    if depth <= 0 or rng.random() < 0.3:
        choice = rng.integers(0, 3)
        if choice == 0:
            return Const(round(float(rng.uniform(0.1, 1.5)), 3))
        if choice == 1 and p > 0:
            return Call("sin", Var("t", int(rng.integers(0, p))))
        return Call("cos", Var("x", int(rng.integers(0, n))))
    kind = rng.integers(0, 4)
    if kind == 0:
        return Call("sin", _any(rng, p, n, depth - 1))
    if kind == 1:
        return Call("cos", _any(rng, p, n, depth - 1))
    if kind == 2:
        return BinOp("*", _bounded(rng, p, n, depth - 1), _bounded(rng, p, n, depth - 1))
    return Neg(_bounded(rng, p, n, depth - 1))


def _any(rng, p: int, n: int, depth: int):
    """Subtree with moderate values; may reference raw variables."""
    if depth <= 0:
        choice = rng.integers(0, 3)
        if choice == 0:
            return Const(round(float(rng.uniform(0.1, 2.0)), 3))
        if choice == 1 and p > 0:
            return Var("t", int(rng.integers(0, p)))
        return Var("x", int(rng.integers(0, n)))
    kind = rng.integers(0, 8)
    if kind in (0, 1):
        return BinOp(
            rng.choice(["+", "-"]), _any(rng, p, n, depth - 1), _any(rng, p, n, depth - 1)
        )
    if kind == 2:
        return BinOp("*", _any(rng, p, n, depth - 1), _bounded(rng, p, n, depth - 1))
    if kind == 3:
        # denominator bounded away from zero: 1.2 + bounded/2 >= 0.2
        den = BinOp(
            "+", Const(1.2), BinOp("*", Const(0.5), _bounded(rng, p, n, depth - 1))
        )
        return BinOp("/", _any(rng, p, n, depth - 1), den)
    if kind == 4:
        return BinOp("^", _bounded(rng, p, n, depth - 1), Const(float(rng.integers(2, 4))))
    if kind == 5:
        return Call("exp", BinOp("*", Const(0.4), _bounded(rng, p, n, depth - 1)))
    if kind == 6:
        inner = BinOp("^", _bounded(rng, p, n, depth - 1), Const(2.0))
        return Call("sqrt", BinOp("+", Const(1.0), inner))
    return Neg(_any(rng, p, n, depth - 1))


def expression_corpus(count: int, seed: int, p: int = 2, n: int = 2):
    """Deterministic list of generated ASTs."""
    rng = np.random.default_rng(seed)
    return [_any(rng, p, n, depth=3) for _ in range(count)]
