"""Parse radial test functions written as small Python-like expressions.

Examples::

    bump(0.2, 0.8) * r
    mul(bump(0.2, 0.8), powr(2))
    boundary_family(0.51, 1e-3, c=1)
    extremal(b=2, p=2) * bump(0.2, 0.8)

Only the names below, numeric literals, ``+``, ``-``, ``*`` and ``r ** x``
are accepted; the expression is never evaluated by Python itself.
"""
from __future__ import annotations

import ast

from .. import radial
from ..errors import ConfigError


def _mul(*xs):
    return radial.Product(tuple(xs))


def _add(*xs):
    return radial.Sum(tuple(xs))


_BUILDERS = {
    "const": lambda v: radial.Const(float(v)),
    "powr": lambda alpha: radial.PowerR(float(alpha)),
    "bnd": lambda c=1.0, k=1.0, R=1.0: radial.BoundaryPower(float(c), float(k), float(R)),
    "logr": lambda R=1.0: radial.LogR(float(R)),
    "bump": lambda r0, r1: radial.Bump(float(r0), float(r1)),
    "rampup": lambda r0, r1: radial.Ramp(float(r0), float(r1), rising=True),
    "rampdown": lambda r0, r1: radial.Ramp(float(r0), float(r1), rising=False),
    "scale": lambda e, s: radial.Scaled(e, float(s)),
    "boundary_family": lambda kappa, delta, c=1.0, R=1.0: radial.make_boundary_family(
        float(kappa), float(delta), float(c), float(R)),
    "origin_family": lambda kappa, delta, R=1.0: radial.make_origin_family(
        float(kappa), float(delta), float(R)),
    "extremal": lambda b, p, c=1.0, R=1.0: radial.extremal_candidate(
        float(b), float(p), float(c), float(R)),
    "mul": _mul,
    "add": _add,
    "neg": lambda e: radial.Negate(e),
}


def _number(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        return float(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _number(node.operand)
        if v is not None:
            return -v if isinstance(node.op, ast.USub) else v
    return None


def _build(node):
    num = _number(node)
    if num is not None:
        return num
    if isinstance(node, ast.Name):
        if node.id == "r":
            return radial.PowerR(1.0)
        raise ConfigError(f"unknown name {node.id!r} in function expression")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return radial.Negate(_expr(node.operand))
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            if isinstance(node.left, ast.Name) and node.left.id == "r":
                e = _number(node.right)
                if e is None:
                    raise ConfigError("exponent of r must be a number")
                return radial.PowerR(e)
            raise ConfigError("'**' is only supported as r ** number")
        left, right = _expr(node.left), _expr(node.right)
        if isinstance(node.op, ast.Mult):
            return radial.Product((left, right))
        if isinstance(node.op, ast.Add):
            return radial.Sum((left, right))
        if isinstance(node.op, ast.Sub):
            return radial.Sum((left, radial.Negate(right)))
        raise ConfigError(f"operator {type(node.op).__name__} is not supported")
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _BUILDERS:
            name = getattr(node.func, "id", "?")
            raise ConfigError(f"unknown function {name!r}; known: {', '.join(sorted(_BUILDERS))}")
        args = [_build(a) for a in node.args]
        kwargs = {k.arg: _build(k.value) for k in node.keywords}
        try:
            return _BUILDERS[node.func.id](*args, **kwargs)
        except TypeError as exc:
            raise ConfigError(f"bad arguments to {node.func.id}: {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"{node.func.id}: {exc}") from None
    raise ConfigError(f"unsupported syntax: {ast.dump(node)[:60]}")


def _expr(node):
    out = _build(node)
    if isinstance(out, float):
        return radial.Const(out)
    return out


def parse_function(text):
    """Turn an expression string into a :class:`~unihardy.radial.RadialExpr`."""
    try:
        tree = ast.parse(str(text).strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse function {text!r}: {exc.msg}") from None
    return _expr(tree.body)
