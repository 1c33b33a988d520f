"""JSON encoding of the package's value types.

Complex numbers are [re, im] pairs, permutations are index arrays, and all
numbers are finite doubles. Every encoder has a decoder that accepts
exactly what the encoder emits.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .convolution import AlgebraBasis, PhasedPermutation
from .groups import FiniteGroup, GroupIso
from .isometry import LpContext, Operator
from .measure import FiniteMeasureAlgebra, MeasurableFunction
from .pnorm import NormEstimate
from .reconstruction import IsoVerdict, P2DemoReport, RecoveredGroup


class SchemaError(ValueError):
    """The JSON payload does not match the expected schema."""


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _from_pair(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise SchemaError("complex numbers are [re, im] pairs")
    return complex(float(pair[0]), float(pair[1]))


def group_to_json(g: FiniteGroup) -> dict[str, Any]:
    return {"order": g.order, "table": [list(row) for row in g.table],
            "identity": g.identity}


def group_from_json(data) -> FiniteGroup:
    try:
        table = tuple(tuple(int(v) for v in row) for row in data["table"])
        return FiniteGroup(int(data["order"]), table, int(data["identity"]))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad group payload: {exc}") from exc


def iso_to_json(iso: GroupIso | None) -> Any:
    if iso is None:
        return None
    return {"map": list(iso.mapping)}


def algebra_weights_to_json(algebra: FiniteMeasureAlgebra) -> dict[str, Any]:
    return {"weights": [float(w) for w in algebra.weights]}


def algebra_weights_from_json(data) -> FiniteMeasureAlgebra:
    try:
        return FiniteMeasureAlgebra(tuple(float(w) for w in data["weights"]))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad weights payload: {exc}") from exc


def function_to_json(f: MeasurableFunction) -> dict[str, Any]:
    return {"re": [float(v.real) for v in f.values],
            "im": [float(v.imag) for v in f.values]}


def function_from_json(data, algebra: FiniteMeasureAlgebra) -> MeasurableFunction:
    try:
        re, im = data["re"], data["im"]
        if len(re) != len(im):
            raise SchemaError("re and im must have equal length")
        return MeasurableFunction(algebra,
                                  tuple(complex(a, b) for a, b in zip(re, im)))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad function payload: {exc}") from exc


def _matrix_to_json(m: np.ndarray) -> list[list[list[float]]]:
    return [[_complex_pair(v) for v in row] for row in np.asarray(m, dtype=complex)]


def _matrix_from_json(rows) -> np.ndarray:
    try:
        return np.array([[_from_pair(v) for v in row] for row in rows], dtype=complex)
    except (TypeError, SchemaError) as exc:
        raise SchemaError(f"bad matrix payload: {exc}") from exc


def operator_to_json(op: Operator) -> dict[str, Any]:
    return {"context": {"weights": [float(w) for w in op.context.algebra.weights],
                        "p": float(op.context.p)},
            "matrix": _matrix_to_json(op.matrix)}


def operator_from_json(data) -> Operator:
    try:
        ctx = data["context"]
        context = LpContext(
            FiniteMeasureAlgebra(tuple(float(w) for w in ctx["weights"])),
            float(ctx["p"]))
        return Operator(context, _matrix_from_json(data["matrix"]))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad operator payload: {exc}") from exc


def algebra_basis_to_json(basis: AlgebraBasis) -> dict[str, Any]:
    return {"n": basis.n, "p": float(basis.p),
            "basis": [_matrix_to_json(m) for m in basis.elements]}


def algebra_basis_from_json(data) -> AlgebraBasis:
    try:
        mats = tuple(_matrix_from_json(m) for m in data["basis"])
        return AlgebraBasis(int(data["n"]), float(data["p"]), mats)
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad algebra payload: {exc}") from exc


def norm_estimate_to_json(est: NormEstimate) -> dict[str, Any]:
    return {"lower": float(est.lower), "upper": float(est.upper),
            "witness": [_complex_pair(v) for v in np.asarray(est.witness)],
            "iterations": int(est.iterations), "converged": bool(est.converged)}


def phased_permutation_to_json(u: PhasedPermutation) -> dict[str, Any]:
    return {"perm": list(u.perm),
            "phases": [_complex_pair(z) for z in u.phases],
            "phase_dim": u.phase_dim}


def phased_permutation_from_json(data) -> PhasedPermutation:
    try:
        return PhasedPermutation(tuple(int(v) for v in data["perm"]),
                                 tuple(_from_pair(z) for z in data["phases"]),
                                 int(data.get("phase_dim", 0)))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad isometry class payload: {exc}") from exc


def recovered_group_to_json(rec: RecoveredGroup) -> dict[str, Any]:
    return {"group": group_to_json(rec.group),
            "representatives": [phased_permutation_to_json(u)
                                for u in rec.representatives]}


def verdict_to_json(v: IsoVerdict) -> dict[str, Any]:
    return {"verdict": v.verdict,
            "evidence": {"p": float(v.p), "q": float(v.q),
                         "group_a": group_to_json(v.group_a),
                         "group_b": group_to_json(v.group_b),
                         "witness": iso_to_json(v.witness)}}


def p2_report_to_json(r: P2DemoReport) -> dict[str, Any]:
    return {"samples": r.samples,
            "basis_mult_residual": float(r.basis_mult_residual),
            "random_mult_residual": float(r.random_mult_residual),
            "norm_agreement_max": float(r.norm_agreement_max),
            "membership_residual": float(r.membership_residual),
            "cycle_generator_spectrum": [_complex_pair(z)
                                         for z in r.cycle_generator_spectrum],
            "klein_involution_spectrum": [_complex_pair(z)
                                          for z in r.klein_involution_spectrum],
            "p3_verdict": r.p3_verdict}
