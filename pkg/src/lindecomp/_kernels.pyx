# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(p) kernels. Mirrors ``lindecomp._fallback`` exactly."""
import numpy as np
cimport numpy as cnp

ctypedef long long i64
ctypedef unsigned long long u64

cnp.import_array()


cdef inline bint _lazy_ok(Py_ssize_t inner, i64 p) noexcept nogil:
    # can a full dot product accumulate in u64 before a single reduction?
    cdef u64 sq = <u64>(p - 1) * <u64>(p - 1)
    if sq == 0:
        return True
    return <u64>inner <= (<u64>0xFFFFFFFFFFFFFFFF) // sq


cdef void _mm(const i64[:, ::1] a, const i64[:, ::1] b, i64[:, ::1] out, i64 p) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1], q = b.shape[1]
    cdef Py_ssize_t i, j, k
    cdef u64 acc
    cdef u64 up = <u64>p
    if _lazy_ok(m, p):
        for i in range(n):
            for j in range(q):
                acc = 0
                for k in range(m):
                    acc += <u64>a[i, k] * <u64>b[k, j]
                out[i, j] = <i64>(acc % up)
    else:
        for i in range(n):
            for j in range(q):
                acc = 0
                for k in range(m):
                    acc = (acc + <u64>a[i, k] * <u64>b[k, j]) % up
                out[i, j] = <i64>acc


def matmul(a, b, p):
    cdef i64 pp = p
    a2 = np.ascontiguousarray(a, dtype=np.int64)
    b2 = np.ascontiguousarray(b, dtype=np.int64)
    vec = a2.ndim == 1
    if vec:
        a2 = a2.reshape(1, -1)
    if a2.shape[1] != b2.shape[0]:
        raise ValueError(f"dimension mismatch: {a2.shape} @ {b2.shape}")
    out = np.empty((a2.shape[0], b2.shape[1]), dtype=np.int64)
    _mm(a2, b2, out, pp)
    return out[0] if vec else out


def sandwich(a, f, b, p):
    cdef i64 pp = p
    a2 = np.ascontiguousarray(a, dtype=np.int64)
    f2 = np.ascontiguousarray(f, dtype=np.int64)
    b2 = np.ascontiguousarray(b, dtype=np.int64)
    if a2.shape[1] != f2.shape[0] or f2.shape[1] != b2.shape[0]:
        raise ValueError(f"dimension mismatch: {a2.shape}, {f2.shape}, {b2.shape}")
    tmp = np.empty((a2.shape[0], f2.shape[1]), dtype=np.int64)
    out = np.empty((a2.shape[0], b2.shape[1]), dtype=np.int64)
    _mm(a2, f2, tmp, pp)
    _mm(tmp, b2, out, pp)
    return out


def sandwich_sum(coeffs, lefts, w, rights, p):
    cdef i64 pp = p
    cdef const i64[::1] c = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef const i64[:, :, ::1] L = np.ascontiguousarray(lefts, dtype=np.int64)
    cdef const i64[:, :, ::1] R = np.ascontiguousarray(rights, dtype=np.int64)
    w2 = np.ascontiguousarray(w, dtype=np.int64)
    cdef Py_ssize_t r = c.shape[0]
    cdef Py_ssize_t n = w2.shape[0], m = w2.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    if r == 0:
        return out
    cdef i64[:, ::1] o = out
    cdef i64[:, ::1] t1 = np.empty((L.shape[1], m), dtype=np.int64)
    cdef i64[:, ::1] t2 = np.empty((n, R.shape[2]), dtype=np.int64)
    cdef const i64[:, ::1] wv = w2
    cdef Py_ssize_t i, x, y
    cdef u64 up = <u64>p
    for i in range(r):
        if c[i] == 0:
            continue
        _mm(L[i], wv, t1, pp)
        _mm(t1, R[i], t2, pp)
        for x in range(n):
            for y in range(m):
                o[x, y] = <i64>((<u64>o[x, y] + <u64>c[i] * <u64>t2[x, y]) % up)
    return out


def reduce(rows, pivots, t, p):
    cdef u64 up = <u64>p
    cdef const i64[:, ::1] E = np.ascontiguousarray(rows, dtype=np.int64)
    cdef const i64[::1] piv = np.ascontiguousarray(pivots, dtype=np.int64)
    res_arr = np.array(t, dtype=np.int64, copy=True, order="C")
    cdef i64[::1] res = res_arr
    cdef Py_ssize_t r = piv.shape[0], d = res.shape[0]
    coeff_arr = np.empty(r, dtype=np.int64)
    cdef i64[::1] cf = coeff_arr
    cdef Py_ssize_t i, j
    cdef u64 f, neg
    for i in range(r):
        cf[i] = res[piv[i]]
    for i in range(r):
        f = <u64>cf[i]
        if f == 0:
            continue
        neg = up - f
        for j in range(d):
            if E[i, j] != 0:
                res[j] = <i64>((<u64>res[j] + neg * <u64>E[i, j]) % up)
    return res_arr, coeff_arr


def eliminate(i64[:, ::1] rows, i64[:, ::1] combos, Py_ssize_t count,
              const i64[::1] new_row, const i64[::1] new_combo, Py_ssize_t pivot, i64 p):
    cdef u64 up = <u64>p
    cdef Py_ssize_t i, j
    cdef Py_ssize_t d = new_row.shape[0], k = new_combo.shape[0]
    cdef u64 neg
    for i in range(count):
        if rows[i, pivot] == 0:
            continue
        neg = up - <u64>rows[i, pivot]
        for j in range(d):
            if new_row[j] != 0:
                rows[i, j] = <i64>((<u64>rows[i, j] + neg * <u64>new_row[j]) % up)
        for j in range(k):
            if new_combo[j] != 0:
                combos[i, j] = <i64>((<u64>combos[i, j] + neg * <u64>new_combo[j]) % up)


def sandwich_all(xs, e, p):
    cdef i64 pp = p
    cdef const i64[:, :, ::1] X = np.ascontiguousarray(xs, dtype=np.int64)
    cdef const i64[:, ::1] E = np.ascontiguousarray(e, dtype=np.int64)
    cdef Py_ssize_t m = X.shape[0], n = E.shape[0], k = E.shape[1]
    out_arr = np.empty((m * m, n, k), dtype=np.int64)
    cdef i64[:, :, ::1] out = out_arr
    cdef i64[:, ::1] left = np.empty((n, k), dtype=np.int64)
    cdef Py_ssize_t i, j
    for i in range(m):
        _mm(X[i], E, left, pp)
        for j in range(m):
            _mm(left, X[j], out[i * m + j], pp)
    return out_arr.reshape(m * m, n * k)


def right_all(v, xs, p):
    cdef i64 pp = p
    cdef const i64[:, :, ::1] X = np.ascontiguousarray(xs, dtype=np.int64)
    cdef const i64[:, ::1] V = np.ascontiguousarray(v, dtype=np.int64).reshape(1, -1)
    cdef Py_ssize_t m = X.shape[0], n = X.shape[2]
    out_arr = np.empty((m, n), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef Py_ssize_t i
    for i in range(m):
        _mm(V, X[i], out[i : i + 1], pp)
    return out_arr


cdef inline i64 _inv(i64 a, i64 p) noexcept nogil:
    cdef i64 t = 0, nt = 1, r = p, nr = a % p, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


def absorb(i64[:, ::1] rows, i64[:, ::1] combos, i64[::1] pivots, Py_ssize_t count, cands, i64 p):
    cdef const i64[:, ::1] C = np.ascontiguousarray(cands, dtype=np.int64)
    cdef Py_ssize_t m = C.shape[0], d = C.shape[1], w = combos.shape[1]
    cdef i64[::1] res = np.empty(d, dtype=np.int64)
    cdef i64[::1] cf = np.empty(max(d, 1), dtype=np.int64)
    cdef i64[::1] combo = np.empty(w, dtype=np.int64)
    cdef u64 up = <u64>p
    cdef Py_ssize_t idx, i, j, pivot, pos
    cdef u64 f, neg, s, acc
    accepted = []
    for idx in range(m):
        for j in range(d):
            res[j] = C[idx, j]
        for i in range(count):
            f = <u64>res[pivots[i]]
            cf[i] = <i64>f
            if f == 0:
                continue
            neg = up - f
            for j in range(d):
                if rows[i, j] != 0:
                    res[j] = <i64>((<u64>res[j] + neg * <u64>rows[i, j]) % up)
        pivot = -1
        for j in range(d):
            if res[j] != 0:
                pivot = j
                break
        if pivot < 0:
            continue
        # combo = -(cf @ combos[:count, :count]), then e_count
        for j in range(w):
            combo[j] = 0
        for j in range(count):
            acc = 0
            for i in range(count):
                if cf[i] != 0 and combos[i, j] != 0:
                    acc = (acc + <u64>cf[i] * <u64>combos[i, j]) % up
            combo[j] = <i64>((up - acc) % up)
        combo[count] = 1
        s = <u64>_inv(res[pivot], p)
        for j in range(d):
            res[j] = <i64>((<u64>res[j] * s) % up)
        for j in range(count + 1):
            combo[j] = <i64>((<u64>combo[j] * s) % up)
        for i in range(count):
            f = <u64>rows[i, pivot]
            if f == 0:
                continue
            neg = up - f
            for j in range(d):
                if res[j] != 0:
                    rows[i, j] = <i64>((<u64>rows[i, j] + neg * <u64>res[j]) % up)
            for j in range(count + 1):
                if combo[j] != 0:
                    combos[i, j] = <i64>((<u64>combos[i, j] + neg * <u64>combo[j]) % up)
        pos = count
        while pos > 0 and pivots[pos - 1] > pivot:
            pos -= 1
        for i in range(count, pos, -1):
            pivots[i] = pivots[i - 1]
            for j in range(d):
                rows[i, j] = rows[i - 1, j]
            for j in range(w):
                combos[i, j] = combos[i - 1, j]
        pivots[pos] = pivot
        for j in range(d):
            rows[pos, j] = res[j]
        for j in range(w):
            combos[pos, j] = combo[j]
        count += 1
        accepted.append(idx)
    return count, np.array(accepted, dtype=np.int64)
