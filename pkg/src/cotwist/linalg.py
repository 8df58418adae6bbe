"""Dense exact linear algebra over the scalar ring.

Rows are sparse dicts ``column-key -> Scalar``.  Elimination divides by
pivots, so matrices must offer invertible pivot entries (rationals,
cyclotomic numbers and unit monomials all qualify); this covers every
rank, kernel and solve the engine performs.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

from .scalars import Scalar

Row = Dict[Hashable, Scalar]


class LinearAlgebraError(Exception):
    pass


def _row_sub(r: Row, factor: Scalar, other: Row) -> Row:
    out = dict(r)
    for k, v in other.items():
        nv = out.get(k, Scalar.zero()) - factor * v
        if nv.is_zero():
            out.pop(k, None)
        else:
            out[k] = nv
    return out


def _pick_pivot(row: Row, forbid: FrozenSet[Hashable]) -> Optional[Hashable]:
    fallback = None
    for col, val in row.items():
        if col in forbid:
            continue
        if val.is_rational():
            return col
        if fallback is None and val.is_unit():
            fallback = col
    return fallback


def echelonize(
    rows: Sequence[Row], forbid: FrozenSet[Hashable] = frozenset()
) -> Tuple[List[Row], List[Hashable], List[Row]]:
    """Gauss-reduce to a fully reduced echelon form.

    Returns ``(echelon rows, pivot column per row, leftover rows)``:
    leftover rows are nonzero rows supported entirely on forbidden
    columns.  Raises when a usable row has no invertible entry.
    """
    work = [dict(r) for r in rows if r]
    ech: List[Row] = []
    pivots: List[Hashable] = []
    leftover: List[Row] = []
    while work:
        row = work.pop()
        # reduce against current echelon
        for other, pc in zip(ech, pivots):
            if pc in row:
                row = _row_sub(row, row[pc], other)
        if not row:
            continue
        col = _pick_pivot(row, forbid)
        if col is None:
            if all(k in forbid for k in row):
                leftover.append(row)
                continue
            raise LinearAlgebraError("no invertible pivot available")
        inv = row[col].inverse()
        row = {k: inv * v for k, v in row.items()}
        for j, other in enumerate(ech):
            if col in other:
                ech[j] = _row_sub(other, other[col], row)
        ech.append(row)
        pivots.append(col)
    return ech, pivots, leftover


def rank(rows: Sequence[Row]) -> int:
    ech, _, leftover = echelonize(rows)
    if leftover:
        raise LinearAlgebraError("unreduced leftover rows")
    return len(ech)


def kernel_basis(rows: Sequence[Row], columns: Sequence[Hashable]) -> List[Row]:
    """Basis of the solution space of ``(each row) . x = 0``.

    Rows are linear equations over the column keys; the returned
    vectors are dicts over ``columns``.
    """
    ech, pivots, leftover = echelonize(rows)
    if leftover:
        raise LinearAlgebraError("unreduced leftover rows")
    pivot_set = set(pivots)
    basis = []
    for fc in columns:
        if fc in pivot_set:
            continue
        vec: Row = {fc: Scalar.one()}
        for row, pc in zip(ech, pivots):
            coeff = row.get(fc)
            if coeff is not None and not coeff.is_zero():
                vec[pc] = -coeff
        basis.append(vec)
    return basis


_RHS = ("__rhs__",)


def solve_columns(
    columns: Sequence[Tuple[Hashable, Row]], rhs: Row
) -> Optional[Row]:
    """Solve ``sum_j x_j . column_j = rhs`` for the column combination.

    ``columns`` is a list of (column key, column vector over row keys).
    Returns the coefficient dict, or None when inconsistent.  Free
    coefficients are set to zero and the solution is verified exactly.
    """
    eqs: Dict[Hashable, Row] = {}
    for ck, colvec in columns:
        for rk, v in colvec.items():
            eqs.setdefault(rk, {})[ck] = v
    for rk, v in rhs.items():
        if not v.is_zero():
            eqs.setdefault(rk, {})[_RHS] = v
    ech, pivots, leftover = echelonize(list(eqs.values()), forbid=frozenset({_RHS}))
    if leftover:
        return None
    sol: Row = {}
    for row, pc in zip(ech, pivots):
        c = row.get(_RHS, Scalar.zero())
        if not c.is_zero():
            sol[pc] = c
    # verify (free coefficients are zero)
    col_map = dict(columns)
    residual: Row = dict(rhs)
    for ck, c in sol.items():
        for rk, v in col_map[ck].items():
            nv = residual.get(rk, Scalar.zero()) - c * v
            if nv.is_zero():
                residual.pop(rk, None)
            else:
                residual[rk] = nv
    residual = {k: v for k, v in residual.items() if not v.is_zero()}
    if residual:
        return None
    return sol
