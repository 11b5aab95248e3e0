"""Python access to the qpt core: bound chains, witness search, lifting and verification."""

import json

from . import _qpt
from ._qpt import (
    BoundOverflowError,
    CheckpointError,
    DomainError,
    InternalError,
    UsageError,
    check_result3_witness as _check_result3_witness,
    corollary_bounds as _corollary_bounds,
    hensel_lift,
    space_size,
)

__all__ = [
    "BoundOverflowError",
    "CheckpointError",
    "DomainError",
    "InternalError",
    "UsageError",
    "v5_bound",
    "wooley_v5",
    "overall_v5",
    "evaluate_v",
    "u_bound",
    "corollary_bounds",
    "make_form",
    "evaluate",
    "find_nonsingular_zero",
    "find_result3_witness",
    "check_result3_witness",
    "hensel_lift",
    "lift_point",
    "lift_result3",
    "space_size",
    "verify",
]


def _bound(doc):
    doc = json.loads(doc)
    doc["bound"] = int(doc["bound"])
    return doc


def v5_bound(p):
    return _bound(_qpt.v5_bound(p))


def wooley_v5(p):
    return _bound(_qpt.wooley_v5(p))


def overall_v5():
    return int(_qpt.overall_v5())


def evaluate_v(profile, p, strategy="best", phi_fallback=False):
    if isinstance(profile, str):
        profile = [int(x) for x in profile.split(",")]
    return _bound(_qpt.evaluate_v(list(profile), p, strategy, phi_fallback))


def u_bound(r, p):
    value, clause = _qpt.u_bound(r, p)
    return int(value), clause


def corollary_bounds(p):
    return tuple(int(v) for v in _corollary_bounds(p))


def make_form(p, k, n, d, terms):
    """terms: iterable of (exponents, coefficient)."""
    return {"p": p, "k": k, "n": n, "d": d,
            "terms": [{"exps": list(e), "coeff": c} for e, c in terms]}


def _text(form):
    return form if isinstance(form, str) else json.dumps(form)


def evaluate(form, point):
    return _qpt.evaluate(_text(form), list(point))


def find_nonsingular_zero(form):
    return _qpt.find_nonsingular_zero(_text(form))


def find_result3_witness(form):
    return _qpt.find_result3_witness(_text(form))


def check_result3_witness(form, point, index):
    return _check_result3_witness(_text(form), list(point), index)


def lift_point(form, point, k):
    return json.loads(_qpt.lift_point(_text(form), list(point), k))


def lift_result3(form, point, index, k):
    return json.loads(_qpt.lift_result3(_text(form), list(point), index, k))


def verify(shape, p, mode="exhaustive", samples=0, seed=0, partitions=1, threads=1):
    return json.loads(_qpt.verify(shape, p, mode, samples, seed, partitions, threads))
