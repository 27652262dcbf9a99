"""Hot table-scan kernels with two interchangeable backends.

Everything here works on plain integer operation tables.  The `numba`
backend jit-compiles tight loops; the `numpy` backend expresses the same
scans as vectorized (and, for monoid completion, batch-vectorized) array
operations.  Select with the environment variable

    STONEAN_LAB_BACKEND=numba   (default when numba imports)
    STONEAN_LAB_BACKEND=numpy

Both backends are required to produce bit-identical results, including
witness order (first witness in lexicographic scan order) and the order of
enumerated monoid tables; tests assert this parity.

Conventions: tables are square int32 arrays with entry [i, j] = op(e_i, e_j);
`leq` is the boolean order matrix with leq[x, y] iff x <= y; for monoid
completion element 0 is the lattice bottom and n-1 the top/unit.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

_ENV_FLAG = "STONEAN_LAB_BACKEND"
_BATCH = 1 << 14  # chunk size for the batch-vectorized completion path


# ---------------------------------------------------------------------------
# loop bodies (njit-compatible; also runnable as plain python for reference)
# ---------------------------------------------------------------------------

def _loop_noncommutative(op):
    n = op.shape[0]
    for i in range(n):
        for j in range(n):
            if op[i, j] != op[j, i]:
                return i, j
    return -1, -1


def _loop_nonassociative(op):
    n = op.shape[0]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if op[op[i, j], k] != op[i, op[j, k]]:
                    return i, j, k
    return -1, -1, -1


def _loop_residuation(leq, mult, res):
    # first (x, y, z) where (x*y <= z) and (x <= y->z) disagree
    n = leq.shape[0]
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if leq[mult[x, y], z] != leq[x, res[y, z]]:
                    return x, y, z
    return -1, -1, -1


def _loop_integrality(leq, mult, meet):
    n = leq.shape[0]
    for i in range(n):
        for j in range(n):
            if not leq[mult[i, j], meet[i, j]]:
                return i, j
    return -1, -1


def _loop_derive_residuum(leq, mult, downcount):
    # res[y, z] = max{x : x*y <= z}; feasible iff that set is a principal
    # down-set.  Returns (res, ok).
    n = leq.shape[0]
    res = np.zeros((n, n), dtype=np.int32)
    for y in range(n):
        for z in range(n):
            cnt = 0
            for x in range(n):
                if leq[mult[x, y], z]:
                    cnt += 1
            xstar = -1
            for x in range(n):
                if leq[mult[x, y], z]:
                    dominates = True
                    for v in range(n):
                        if leq[mult[v, y], z] and not leq[v, x]:
                            dominates = False
                            break
                    if dominates:
                        xstar = x
                        break
            if xstar < 0 or downcount[xstar] != cnt:
                return res, False
            res[y, z] = xstar
    return res, True


def _loop_complete_monoids(cells, cands, cand_len, base, out):
    # DFS over free cells in lex order, candidates ascending, so tables are
    # emitted in lexicographic order.  Returns count, or -1 on buffer overflow.
    n = base.shape[0]
    k = cells.shape[0]
    mult = base.copy()
    count = 0
    if k == 0:
        good = True
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if mult[mult[x, y], z] != mult[x, mult[y, z]]:
                        good = False
        if good:
            out[0] = mult
            count = 1
        return count
    choice = np.full(k, -1, dtype=np.int64)
    pos = 0
    while pos >= 0:
        choice[pos] += 1
        i = cells[pos, 0]
        j = cells[pos, 1]
        if choice[pos] >= cand_len[pos]:
            mult[i, j] = -1
            mult[j, i] = -1
            choice[pos] = -1
            pos -= 1
            continue
        v = cands[pos, choice[pos]]
        mult[i, j] = v
        mult[j, i] = v
        # prune on associativity triples that are fully determined already
        ok = True
        for t in range(n):
            b = mult[j, t]
            if b >= 0 and mult[v, t] >= 0 and mult[i, b] >= 0:
                if mult[v, t] != mult[i, b]:
                    ok = False
                    break
            c = mult[t, i]
            if c >= 0 and mult[c, j] >= 0 and mult[t, v] >= 0:
                if mult[c, j] != mult[t, v]:
                    ok = False
                    break
        if not ok:
            continue
        if pos == k - 1:
            good = True
            for x in range(n):
                for y in range(n):
                    for z in range(n):
                        if mult[mult[x, y], z] != mult[x, mult[y, z]]:
                            good = False
                            break
                    if not good:
                        break
                if not good:
                    break
            if good:
                if count >= out.shape[0]:
                    return -1
                out[count] = mult
                count += 1
            continue
        pos += 1
    return count


def _loop_canonical_tables(stack, perms):
    # minimal lexicographic relabel of the (4, n, n) table stack over perms
    p = perms.shape[0]
    n = stack.shape[1]
    best = stack.copy()
    cand = np.empty_like(stack)
    for q in range(p):
        perm = perms[q]
        for t in range(4):
            for i in range(n):
                for j in range(n):
                    cand[t, perm[i], perm[j]] = perm[stack[t, i, j]]
        flat_c = cand.ravel()
        flat_b = best.ravel()
        for idx in range(flat_c.size):
            if flat_c[idx] < flat_b[idx]:
                best[:] = cand
                break
            if flat_c[idx] > flat_b[idx]:
                break
    return best


_LOOP_FNS = {
    "noncommutative": _loop_noncommutative,
    "nonassociative": _loop_nonassociative,
    "residuation": _loop_residuation,
    "integrality": _loop_integrality,
    "derive_residuum": _loop_derive_residuum,
    "complete_monoids": _loop_complete_monoids,
    "canonical_tables": _loop_canonical_tables,
}


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def _first_true(mask):
    hits = np.argwhere(mask)
    if hits.size == 0:
        return None
    return tuple(int(v) for v in hits[0])


def _np_noncommutative(op):
    return _first_true(op != op.T)


def _np_nonassociative(op):
    n = op.shape[0]
    lhs = op[op, :]                                       # [x,y,z] = (x*y)*z
    rhs = op[np.arange(n)[:, None, None], op[None, :, :]]  # [x,y,z] = x*(y*z)
    return _first_true(lhs != rhs)


def _np_residuation(leq, mult, res):
    c1 = leq[mult, :]   # [x,y,z] = mult[x,y] <= z
    c2 = leq[:, res]    # [x,y,z] = x <= res[y,z]
    return _first_true(c1 != c2)


def _np_integrality(leq, mult, meet):
    n = leq.shape[0]
    grid = leq[mult.ravel(), meet.ravel()].reshape(n, n)
    return _first_true(~grid)


def _np_derive_residuum(leq, mult, downcount):
    n = leq.shape[0]
    member = leq[mult, :]                       # member[x,y,z] = x in S(y,z)
    cnt = member.sum(axis=0)                    # |S(y,z)|
    # bad[x,y,z] = some v in S(y,z) with not v <= x
    not_leq = (~leq).astype(np.int32)
    bad = np.tensordot(not_leq, member.astype(np.int32), axes=([0], [0]))
    dominates = member & (bad == 0) & (downcount[:, None, None] == cnt[None, :, :])
    found = dominates.any(axis=0)
    if not found.all():
        return None
    res = dominates.argmax(axis=0).astype(np.int32)
    return res


def _np_complete_monoids_batches(cells, cand_lists, base):
    n = base.shape[0]
    k = len(cells)
    if k == 0:
        w = _np_nonassociative(base)
        yield base[None, :, :] if w is None else np.empty((0, n, n), np.int32)
        return
    rows = np.array([c[0] for c in cells])
    cols = np.array([c[1] for c in cells])
    xs = np.arange(n)
    it = itertools.product(*cand_lists)
    while True:
        chunk = list(itertools.islice(it, _BATCH))
        if not chunk:
            return
        vals = np.array(chunk, dtype=np.int32)
        m = vals.shape[0]
        tabs = np.broadcast_to(base, (m, n, n)).copy()
        tabs[:, rows, cols] = vals
        tabs[:, cols, rows] = vals
        idx0 = np.arange(m)[:, None, None, None]
        lhs = tabs[idx0, tabs[:, :, :, None], xs[None, None, None, :]]
        rhs = tabs[idx0, xs[None, :, None, None], tabs[:, None, :, :]]
        ok = (lhs == rhs).reshape(m, -1).all(axis=1)
        yield tabs[ok]


def _np_canonical_tables(stack, perms):
    best = None
    best_key = None
    for perm in perms:
        inv = np.argsort(perm)
        cand = perm[stack[:, inv][:, :, inv]]
        key = cand.astype(np.uint8).tobytes()
        if best_key is None or key < best_key:
            best_key = key
            best = cand
    return np.ascontiguousarray(best)


# ---------------------------------------------------------------------------
# backend selection and public wrappers
# ---------------------------------------------------------------------------

def _build_numba():
    from numba import njit

    jit = lambda f: njit(cache=True)(f)
    return {name: jit(fn) for name, fn in _LOOP_FNS.items()}


_IMPLS: dict[str, dict] = {}


def available_backends() -> tuple[str, ...]:
    names = ["numpy"]
    try:
        import numba  # noqa: F401

        names.insert(0, "numba")
    except ImportError:
        pass
    return tuple(names)


def backend() -> str:
    """Active backend name for this process."""
    choice = os.environ.get(_ENV_FLAG, "").strip().lower()
    avail = available_backends()
    if choice in avail:
        return choice
    if choice and choice not in ("", "auto"):
        raise ValueError(f"unknown {_ENV_FLAG}={choice!r}; available: {avail}")
    return avail[0]


def _numba_impl():
    if "numba" not in _IMPLS:
        _IMPLS["numba"] = _build_numba()
    return _IMPLS["numba"]


def _wit(raw):
    return None if raw[0] < 0 else tuple(int(v) for v in raw)


def noncommutative_witness(op, backend_name: str | None = None):
    if (backend_name or backend()) == "numba":
        return _wit(_numba_impl()["noncommutative"](op))
    return _np_noncommutative(op)


def nonassociative_witness(op, backend_name: str | None = None):
    if (backend_name or backend()) == "numba":
        return _wit(_numba_impl()["nonassociative"](op))
    return _np_nonassociative(op)


def residuation_witness(leq, mult, res, backend_name: str | None = None):
    if (backend_name or backend()) == "numba":
        return _wit(_numba_impl()["residuation"](leq, mult, res))
    return _np_residuation(leq, mult, res)


def integrality_witness(leq, mult, meet, backend_name: str | None = None):
    if (backend_name or backend()) == "numba":
        return _wit(_numba_impl()["integrality"](leq, mult, meet))
    return _np_integrality(leq, mult, meet)


def derive_residuum(leq, mult, backend_name: str | None = None):
    """Residuum table for `mult` over the order `leq`, or None when the
    structure is not residuated."""
    downcount = leq.sum(axis=0).astype(np.int64)
    if (backend_name or backend()) == "numba":
        res, ok = _numba_impl()["derive_residuum"](leq, mult, downcount)
        return res if ok else None
    return _np_derive_residuum(leq, mult, downcount)


def _completion_problem(meet, leq):
    """Free cells and per-cell candidate lists for commutative integral
    monoid tables with unit n-1 and absorbing 0."""
    n = meet.shape[0]
    base = np.full((n, n), -1, dtype=np.int32)
    base[0, :] = 0
    base[:, 0] = 0
    base[n - 1, :] = np.arange(n, dtype=np.int32)
    base[:, n - 1] = np.arange(n, dtype=np.int32)
    cells = [(i, j) for i in range(1, n - 1) for j in range(i, n - 1)]
    cand_lists = []
    for i, j in cells:
        m = meet[i, j]
        cand_lists.append([x for x in range(n) if leq[x, m]])
    return base, cells, cand_lists


def complete_monoids(meet, leq, backend_name: str | None = None):
    """All associative completions, in lexicographic cell order, as an
    (m, n, n) array.  Residuation feasibility is the caller's second pass."""
    n = meet.shape[0]
    base, cells, cand_lists = _completion_problem(meet, leq)
    if (backend_name or backend()) == "numba":
        cap = max(64, int(np.prod([float(len(c)) for c in cand_lists])) + 1)
        cap = min(cap, 1 << 22)
        k = len(cells)
        cells_a = np.array(cells, dtype=np.int64).reshape(k, 2)
        width = max((len(c) for c in cand_lists), default=1)
        cands = np.zeros((max(k, 1), width), dtype=np.int32)
        cand_len = np.zeros(max(k, 1), dtype=np.int64)
        for idx, c in enumerate(cand_lists):
            cands[idx, : len(c)] = c
            cand_len[idx] = len(c)
        while True:
            out = np.empty((cap, n, n), dtype=np.int32)
            got = _numba_impl()["complete_monoids"](cells_a, cands, cand_len, base, out)
            if got >= 0:
                return out[:got].copy()
            cap *= 4
    parts = [p for p in _np_complete_monoids_batches(cells, cand_lists, base) if len(p)]
    if not parts:
        return np.empty((0, n, n), dtype=np.int32)
    return np.concatenate(parts, axis=0)


def canonical_tables(stack, perms, backend_name: str | None = None):
    """Lexicographically minimal relabel of a (4, n, n) stack over `perms`."""
    if (backend_name or backend()) == "numba":
        return _numba_impl()["canonical_tables"](stack, perms)
    return _np_canonical_tables(stack, perms)
