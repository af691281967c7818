"""JSON encodings for scalars, matrices, quivers, ADHM data and fold contexts.

Scalars are strings "p/q" (or "p"); elements of Q(zeta_N) are arrays of such
strings and the enclosing matrix records N.  Vertex and arrow ids become
object keys: strings stay as they are, ints become decimal strings and
tuples become their JSON array text.
"""

from __future__ import annotations

import json

from .adhm import AdhmDatum, GroupElement
from .exactmath import Cyclotomic, Matrix, field_constant, rational
from .foldfix import Decomposition, FoldContext, build_context
from .quiver import AdmAut, Quiver, folding_fixtures, type_a, type_d


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def scalar_to_json(x):
    if isinstance(x, Cyclotomic):
        if x.is_rational():
            return str(x.coeffs[0])
        return [str(c) for c in x.coeffs]
    return str(rational(x))


def scalar_from_json(value, field_order: int = 2):
    if isinstance(value, list):
        if field_order <= 2:
            raise ValueError("coefficient arrays need a field order of at least 3")
        return Cyclotomic(field_order, value)
    if isinstance(value, (int, str)):
        return field_constant(field_order, rational(value))
    raise ValueError(f"cannot read scalar {value!r}")


def _field_order_of(m: Matrix) -> int:
    orders = {x.order for x in m.entries() if isinstance(x, Cyclotomic) and not x.is_rational()}
    if len(orders) > 1:
        raise ValueError("matrix mixes cyclotomic fields")
    return orders.pop() if orders else 2


def matrix_to_json(m: Matrix) -> dict:
    out = {"rows": m.rows, "cols": m.cols,
           "entries": [[scalar_to_json(m[r, c]) for c in range(m.cols)] for r in range(m.rows)]}
    order = _field_order_of(m)
    if order > 2:
        out["field_order"] = order
    return out


def matrix_from_json(data, field_order: int | None = None) -> Matrix:
    if isinstance(data, list):
        rows = data
        data = {"rows": len(rows), "cols": len(rows[0]) if rows else 0, "entries": rows}
    order = field_order or data.get("field_order", 2)
    rows, cols = int(data["rows"]), int(data["cols"])
    entries = data["entries"]
    if len(entries) != rows or any(len(row) != cols for row in entries):
        raise ValueError("matrix entries do not match rows/cols")
    return Matrix(rows, cols, [[scalar_from_json(v, order) for v in row] for row in entries])


# --------------------------------------------------------------------- ids


def encode_id(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return json.dumps(_id_json(x))
    return str(x)


def _id_json(x):
    return [_id_json(y) for y in x] if isinstance(x, tuple) else x


def _lookup(ids) -> dict:
    return {encode_id(i): i for i in ids}


def keyed_to_json(values: dict, fn=lambda v: v) -> dict:
    return {encode_id(k): fn(v) for k, v in values.items()}


def keyed_from_json(data, ids, fn=lambda v: v) -> dict:
    """Read a map keyed by ids; a list is taken in the order of ids."""
    ids = list(ids)
    if isinstance(data, list):
        if len(data) != len(ids):
            raise ValueError(f"expected {len(ids)} values, got {len(data)}")
        return {i: fn(v) for i, v in zip(ids, data)}
    table = _lookup(ids)
    unknown = set(data) - set(table)
    if unknown:
        raise ValueError(f"unknown ids: {sorted(unknown)}")
    return {table[k]: fn(v) for k, v in data.items()}


# ----------------------------------------------------------------- quivers


def named_fold(name: str) -> tuple[Quiver, AdmAut]:
    fixtures = folding_fixtures()
    if name not in fixtures:
        raise ValueError(f"unknown fixture {name!r}; choose from {sorted(fixtures)}")
    return fixtures[name]


def named_quiver(name: str) -> Quiver:
    """'A<odd m>', 'D<m>' or a folding fixture name."""
    if name[:1] in "AD" and name[1:].isdigit():
        m = int(name[1:])
        if name[0] == "A" and m % 2 == 1:
            return type_a((m + 1) // 2)
        if name[0] == "D" and m >= 3:
            return type_d(m - 1)
        raise ValueError(f"no fixture for {name}")
    return named_fold(name)[0]


def quiver_from_ref(ref) -> Quiver:
    if isinstance(ref, str):
        return named_quiver(ref)
    if isinstance(ref, dict):
        return Quiver.from_json(ref)
    raise ValueError("quiver_ref must be a fixture name or a quiver object")


# ------------------------------------------------------------------- ADHM


def datum_to_json(x: AdhmDatum, quiver_ref=None) -> dict:
    return {
        "quiver_ref": quiver_ref if quiver_ref is not None else x.quiver.to_json(),
        "v": keyed_to_json(x.v),
        "w": keyed_to_json(x.w),
        "field_order": x.field_order,
        "B": keyed_to_json(x.B, matrix_to_json),
        "Gamma": keyed_to_json(x.Gamma, matrix_to_json),
        "Delta": keyed_to_json(x.Delta, matrix_to_json),
    }


def datum_from_json(data: dict, quiver: Quiver | None = None) -> AdhmDatum:
    q = quiver or quiver_from_ref(data["quiver_ref"])
    order = int(data.get("field_order", 2))
    read = lambda m: matrix_from_json(m, order)  # noqa: E731
    return AdhmDatum(
        q,
        keyed_from_json(data["v"], q.vertices, int),
        keyed_from_json(data["w"], q.vertices, int),
        keyed_from_json(data["B"], [h.id for h in q.arrows], read),
        keyed_from_json(data["Gamma"], q.vertices, read),
        keyed_from_json(data["Delta"], q.vertices, read),
        order,
    )


def group_to_json(g: GroupElement) -> dict:
    return {"kind": g.kind, "blocks": keyed_to_json(g.blocks, matrix_to_json)}


def decomposition_to_json(dec: Decomposition) -> dict:
    return keyed_to_json(dec.as_dict())


# ----------------------------------------------------------------- context


def context_from_json(data: dict) -> FoldContext:
    """{fixture | quiver + aut, v, w, phi?, sigma?}."""
    if "fixture" in data:
        q, a = named_fold(data["fixture"])
    else:
        q = Quiver.from_json(data["quiver"])
        a = AdmAut.from_json(q, data["aut"])
    order = int(data.get("field_order", 0)) or None
    read = lambda m: matrix_from_json(m, order)  # noqa: E731
    v = keyed_from_json(data["v"], q.vertices, int)
    w = keyed_from_json(data["w"], q.vertices, int)
    phi = keyed_from_json(data.get("phi", {}), q.vertices, read)
    sigma = keyed_from_json(data.get("sigma", {}), q.vertices, read)
    return build_context(q, a, v, w, phi, sigma)


def context_to_json(ctx: FoldContext) -> dict:
    return {
        "quiver": ctx.quiver.to_json(),
        "aut": ctx.aut.to_json(),
        "v": keyed_to_json(ctx.v),
        "w": keyed_to_json(ctx.w),
        "phi": keyed_to_json(ctx.phi, matrix_to_json),
        "sigma": keyed_to_json(ctx.sigma, matrix_to_json),
        "field_order": ctx.field_order,
        "w_basis": keyed_to_json(ctx.w_basis, matrix_to_json),
        "w_split": keyed_to_json(ctx.w_split),
    }
