"""Inner loops: quadrature of the Q integrand and the two greedy simulators.

Everything here is written for both backends (see :mod:`hypergreedy._accel`):
only scalar arithmetic and integer indexing, no allocation, no numpy calls.
Buffers are allocated by the callers in :mod:`theory`, :mod:`configmodel` and
:mod:`greedy`. Randomness arrives as a pre-drawn array of uniforms in [0, 1)
so that both backends consume the stream identically.
"""

from ._accel import njit

MAX_SIMPSON_DEPTH = 50


@njit
def horner(c, x):
    acc = 0.0
    for i in range(len(c) - 1, -1, -1):
        acc = acc * x + c[i]
    return acc


@njit
def q_integrand(d1, d2, k, w):
    """(k-1) w P''(w) / P'(w)^k, with d1, d2 the coefficients of P', P''."""
    return (k - 1) * w * horner(d2, w) / horner(d1, w) ** k


STACK_WIDTH = 9  # a, fa, m, fm, b, fb, whole, tol, depth
STACK_SIZE = STACK_WIDTH * (MAX_SIMPSON_DEPTH + 2)


@njit
def _push(stack, top, a, fa, m, fm, b, fb, whole, tol, depth):
    base = top * STACK_WIDTH
    stack[base] = a
    stack[base + 1] = fa
    stack[base + 2] = m
    stack[base + 3] = fm
    stack[base + 4] = b
    stack[base + 5] = fb
    stack[base + 6] = whole
    stack[base + 7] = tol
    stack[base + 8] = depth
    return top + 1


@njit
def q_quadrature(d1, d2, k, a, b, abstol, reltol, stack):
    """Adaptive Simpson estimate of the Q integrand over [a, b].

    The target error is ``max(abstol, reltol * |coarse estimate|)``; the
    relative part only matters when ``a`` is close to a pole of the integrand.
    Panels are refined depth-first with ``stack`` (length ``STACK_SIZE``) as
    the work list, and accepted panels get the Richardson correction.
    """
    if b <= a:
        return 0.0
    m = 0.5 * (a + b)
    fa = q_integrand(d1, d2, k, a)
    fb = q_integrand(d1, d2, k, b)
    fm = q_integrand(d1, d2, k, m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    tol = max(abstol, reltol * abs(whole))
    top = _push(stack, 0, a, fa, m, fm, b, fb, whole, tol, MAX_SIMPSON_DEPTH)
    total = 0.0
    while top > 0:
        top -= 1
        base = top * STACK_WIDTH
        a = stack[base]
        fa = stack[base + 1]
        m = stack[base + 2]
        fm = stack[base + 3]
        b = stack[base + 4]
        fb = stack[base + 5]
        whole = stack[base + 6]
        tol = stack[base + 7]
        depth = stack[base + 8]
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = q_integrand(d1, d2, k, lm)
        frm = q_integrand(d1, d2, k, rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if depth <= 0.0 or abs(delta) <= 15.0 * tol or lm <= a or rm >= b:
            total += left + right + delta / 15.0
        else:
            # right half first so the left half is popped (and summed) first
            top = _push(stack, top, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1.0)
            top = _push(stack, top, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1.0)
    return total


@njit
def pool_remove(owner, where, vpts, start, deg, counts, live, p):
    """Remove the live point at position ``p``; return the new live count.

    ``owner[p]`` is the vertex of the point at position p, and vertex v keeps
    the positions of its live points in ``vpts[start[v]:start[v] + deg[v]]``
    with ``where[p]`` the slot holding p. Both arrays are swap-removed.
    """
    v = owner[p]
    j = where[p]
    d = deg[v]
    lastj = start[v] + d - 1
    q = vpts[lastj]
    vpts[j] = q
    where[q] = j
    vpts[lastj] = p
    deg[v] = d - 1
    counts[d] -= 1
    counts[d - 1] += 1
    last = live - 1
    if p != last:
        u = owner[last]
        owner[p] = u
        jj = where[last]
        where[p] = jj
        vpts[jj] = p
    owner[last] = -1
    return last


@njit
def _draw(uniforms, draw, live):
    idx = int(uniforms[draw] * live)
    if idx >= live:
        idx = live - 1
    return idx


@njit
def _record(rec_step, rec_counts, rec_m, nrec, step, counts, width, m):
    rec_step[nrec] = step
    base = nrec * width
    for i in range(width):
        rec_counts[base + i] = counts[i]
    rec_m[nrec] = m
    return nrec + 1


@njit
def point_process(
    owner, where, vpts, start, deg, counts, live, k, uniforms, record_every,
    sel, matched, rec_step, rec_counts, rec_m,
):
    """Random greedy on the lazily revealed configuration model.

    Each step draws k uniform live points as the matched edge, then purges the
    remaining points of every distinct matched vertex (ascending id), drawing
    k - 1 uniform partners for each purged point. Returns
    ``(steps, covered, n_records, live)``; ``matched[j*k:(j+1)*k]`` holds the
    owners of step j's selection points and ``counts`` is left at the final
    degree-class census (index 0 included).
    """
    width = len(counts)
    draw = 0
    step = 0
    covered = 0
    nrec = _record(rec_step, rec_counts, rec_m, 0, 0, counts, width, live // k)
    while live >= k:
        for r in range(k):
            idx = _draw(uniforms, draw, live)
            draw += 1
            v = owner[idx]
            matched[step * k + r] = v
            sel[r] = v
            live = pool_remove(owner, where, vpts, start, deg, counts, live, idx)
        # insertion sort, k is tiny
        for r in range(1, k):
            x = sel[r]
            s = r - 1
            while s >= 0 and sel[s] > x:
                sel[s + 1] = sel[s]
                s -= 1
            sel[s + 1] = x
        for r in range(k):
            v = sel[r]
            if r > 0 and sel[r - 1] == v:
                continue
            covered += 1
            while deg[v] > 0 and live > 0:
                p = vpts[start[v]]
                live = pool_remove(owner, where, vpts, start, deg, counts, live, p)
                for _ in range(k - 1):
                    if live == 0:
                        break
                    idx = _draw(uniforms, draw, live)
                    draw += 1
                    live = pool_remove(owner, where, vpts, start, deg, counts, live, idx)
        step += 1
        if step % record_every == 0:
            nrec = _record(rec_step, rec_counts, rec_m, nrec, step, counts, width, live // k)
    if rec_step[nrec - 1] != step:
        nrec = _record(rec_step, rec_counts, rec_m, nrec, step, counts, width, live // k)
    return step, covered, nrec, live


@njit
def explicit_greedy(
    edges, k, n_edges, inc_start, inc_edges, deg, counts, uniforms, record_every,
    alive, epos, covered_flag, matched, rec_step, rec_counts, rec_m,
):
    """Literal random greedy on an explicit multihypergraph.

    ``edges`` is the flat (n_edges * k) vertex list; ``inc_edges[inc_start[v]:
    inc_start[v+1]]`` are the edges at v, repeated by multiplicity. Alive edge
    ids are kept swap-removed in ``alive[:ne]`` with ``epos`` the inverse
    (``-1`` once deleted). Returns ``(steps, covered, n_records)``.
    """
    width = len(counts)
    ne = n_edges
    step = 0
    covered = 0
    nrec = _record(rec_step, rec_counts, rec_m, 0, 0, counts, width, ne)
    while ne > 0:
        idx = _draw(uniforms, step, ne)
        e = alive[idx]
        matched[step] = e
        for r in range(k):
            v = edges[e * k + r]
            if covered_flag[v] != 0:
                continue
            covered_flag[v] = 1
            covered += 1
            for t in range(inc_start[v], inc_start[v + 1]):
                f = inc_edges[t]
                pos = epos[f]
                if pos < 0:
                    continue
                last = alive[ne - 1]
                alive[pos] = last
                epos[last] = pos
                epos[f] = -1
                ne -= 1
                for r2 in range(k):
                    w = edges[f * k + r2]
                    d = deg[w]
                    counts[d] -= 1
                    counts[d - 1] += 1
                    deg[w] = d - 1
        step += 1
        if step % record_every == 0:
            nrec = _record(rec_step, rec_counts, rec_m, nrec, step, counts, width, ne)
    if rec_step[nrec - 1] != step:
        nrec = _record(rec_step, rec_counts, rec_m, nrec, step, counts, width, ne)
    return step, covered, nrec
