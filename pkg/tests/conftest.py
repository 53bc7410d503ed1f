"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import random

import numpy as np
import pytest

from legendre_curves import ScalarFun, default_gallery
from legendre_curves.exprs import (Binary, Const, Number, PowInt, Unary, Var)


@pytest.fixture(scope="session")
def roster():
    return default_gallery()


def brute_force_zeros(fun, domain, n=1_000_000, half_open=False, rel_tol=1e-9):
    """Dense sign/threshold scan, independent of the root-finding code.

    Sign changes are located by linear interpolation; grid samples at
    rounding level (touch zeros, endpoint zeros) are clustered and the
    sample of least magnitude represents the cluster.
    """
    fun = ScalarFun.wrap(fun)
    a, b = float(domain[0]), float(domain[1])
    ts = np.linspace(a, b, n + 1)
    v = fun.values(ts)
    scale = float(np.max(np.abs(v)))
    assert scale > 0.0
    h = (b - a) / n

    tiny = np.abs(v) <= rel_tol * scale
    sgn = np.sign(np.where(tiny, 0.0, v))
    idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    roots = list(ts[idx] - v[idx] * h / (v[idx + 1] - v[idx]))

    # group consecutive tiny samples; keep the best representative of each
    tiny_idx = np.nonzero(tiny)[0]
    groups = []
    for i in tiny_idx:
        if groups and i - groups[-1][-1] <= 2:
            groups[-1].append(i)
        else:
            groups.append([i])
    for g in groups:
        g = np.asarray(g)
        rep = float(ts[g[np.argmin(np.abs(v[g]))]])
        if not any(abs(rep - r) <= 4 * h for r in roots):
            roots.append(rep)

    roots = sorted(float(r) for r in roots)
    merged = []
    for r in roots:
        if merged and r - merged[-1] <= 4 * h:
            continue
        merged.append(r)
    if half_open:
        merged = [r for r in merged if abs(r - b) > 4 * h]
    return merged


def random_ast(rng: random.Random, depth: int, arity: str = "one-var"):
    """Seeded random AST; negation of a literal folds into the literal, the
    same canonical form the parser produces."""
    if depth <= 0:
        choice = rng.randrange(3)
        if choice == 0:
            return Number(round(rng.uniform(0, 10), 3))
        if choice == 1:
            return Var("t") if arity == "one-var" else Var(rng.choice("xy"))
        return Const("pi")
    kind = rng.randrange(6)
    if kind == 0:
        return Number(round(rng.uniform(0, 10), 3))
    if kind == 1:
        return Var("t") if arity == "one-var" else Var(rng.choice("xy"))
    if kind == 2:
        child = random_ast(rng, depth - 1, arity)
        if isinstance(child, Number):
            return Number(-child.value)
        return Unary("neg", child)
    if kind == 3:
        op = rng.choice(["sin", "cos", "exp", "sqrt", "atan"])
        return Unary(op, random_ast(rng, depth - 1, arity))
    if kind == 4:
        op = rng.choice(["add", "sub", "mul", "div"])
        return Binary(op, random_ast(rng, depth - 1, arity),
                      random_ast(rng, depth - 1, arity))
    return PowInt(random_ast(rng, depth - 1, arity), rng.randrange(0, 5))
