"""Pure-Python column reduction over Z/p; same contract as the compiled kernel."""

from __future__ import annotations


def reduce_columns(indptr, indices, data, n_rows, p, return_columns=False):
    """Standard left-to-right column reduction of a CSC matrix over Z/p.

    Row indices within a column need not be sorted; duplicates are summed.
    Returns ``low`` with ``low[j]`` the pivot row of reduced column ``j``
    (``-1`` when it reduces to zero).  With ``return_columns`` the reduced
    columns are returned too, as ``{row: coeff}`` dicts with coefficients in
    ``0..p-1``.
    """
    n = len(indptr) - 1
    pivot_col = [-1] * n_rows
    low = [-1] * n
    stored: list[dict[int, int] | None] = [None] * n
    cols_out = [] if return_columns else None
    for j in range(n):
        col: dict[int, int] = {}
        for k in range(indptr[j], indptr[j + 1]):
            r = int(indices[k])
            v = (col.get(r, 0) + int(data[k])) % p
            if v:
                col[r] = v
            else:
                col.pop(r, None)
        while col:
            l = max(col)
            k = pivot_col[l]
            if k < 0:
                inv = pow(col[l], p - 2, p)
                if inv != 1:
                    col = {r: v * inv % p for r, v in col.items()}
                pivot_col[l] = j
                low[j] = l
                stored[j] = col
                break
            f = col[l]
            for r, v in stored[k].items():
                nv = (col.get(r, 0) - f * v) % p
                if nv:
                    col[r] = nv
                else:
                    del col[r]
        if cols_out is not None:
            cols_out.append(dict(col))
    if return_columns:
        return low, cols_out
    return low
