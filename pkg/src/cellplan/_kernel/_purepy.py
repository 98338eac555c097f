"""Pure-Python kernel backend.

Mirrors ``cellplan._kernel._core`` operation for operation. Arithmetic is
kept in the same order as the compiled code (and contraction is disabled
there), so both backends produce bit-identical doubles.

All functions take C-contiguous float64/int32 numpy arrays; joint vectors
are returned as plain lists of floats.
"""

import math

BACKEND = "pure"

_TWO_PI = 2.0 * math.pi
_SINGULARITY_EPS = 1e-12


def _wrap(x):
    r = math.fmod(math.pi - x, _TWO_PI)
    if r < 0.0:
        r += _TWO_PI
    return math.pi - r


def _mat_mul4(a, b):
    out = [[0.0] * 4 for _ in range(4)]
    for i in range(4):
        ai = a[i]
        oi = out[i]
        for j in range(4):
            s = 0.0
            for k in range(4):
                s += ai[k] * b[k][j]
            oi[j] = s
    return out


def _joint_motion(kind, ax, ay, az, q):
    if kind == 0:  # revolute: Rodrigues rotation about the joint axis
        c = math.cos(q)
        s = math.sin(q)
        v = 1.0 - c
        return [
            [ax * ax * v + c, ax * ay * v - az * s, ax * az * v + ay * s, 0.0],
            [ax * ay * v + az * s, ay * ay * v + c, ay * az * v - ax * s, 0.0],
            [ax * az * v - ay * s, ay * az * v + ax * s, az * az * v + c, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    return [
        [1.0, 0.0, 0.0, ax * q],
        [0.0, 1.0, 0.0, ay * q],
        [0.0, 0.0, 1.0, az * q],
        [0.0, 0.0, 0.0, 1.0],
    ]


def _as_lists(jtypes, axes, origins, tool, base):
    jt = [int(v) for v in jtypes]
    ax = [[float(axes[i][j]) for j in range(3)] for i in range(len(jt))]
    org = [[[float(origins[i][r][c]) for c in range(4)] for r in range(4)] for i in range(len(jt))]
    tl = [[float(tool[r][c]) for c in range(4)] for r in range(4)]
    bs = [[float(base[r][c]) for c in range(4)] for r in range(4)]
    return jt, ax, org, tl, bs


def _fk_frames(jt, ax, org, tl, bs, q):
    """TCP transform plus per-joint world positions and axes."""
    t = [row[:] for row in bs]
    jpos = []
    jaxis = []
    for i in range(len(jt)):
        t = _mat_mul4(t, org[i])
        axi = ax[i]
        wx = t[0][0] * axi[0] + t[0][1] * axi[1] + t[0][2] * axi[2]
        wy = t[1][0] * axi[0] + t[1][1] * axi[1] + t[1][2] * axi[2]
        wz = t[2][0] * axi[0] + t[2][1] * axi[1] + t[2][2] * axi[2]
        jpos.append((t[0][3], t[1][3], t[2][3]))
        jaxis.append((wx, wy, wz))
        t = _mat_mul4(t, _joint_motion(jt[i], axi[0], axi[1], axi[2], q[i]))
    t = _mat_mul4(t, tl)
    return t, jpos, jaxis


def _jacobian_from_frames(jt, t, jpos, jaxis):
    n = len(jt)
    jac = [[0.0] * n for _ in range(6)]
    ex = t[0][3]
    ey = t[1][3]
    ez = t[2][3]
    for i in range(n):
        zx, zy, zz = jaxis[i]
        if jt[i] == 0:
            rx = ex - jpos[i][0]
            ry = ey - jpos[i][1]
            rz = ez - jpos[i][2]
            jac[0][i] = zy * rz - zz * ry
            jac[1][i] = zz * rx - zx * rz
            jac[2][i] = zx * ry - zy * rx
            jac[3][i] = zx
            jac[4][i] = zy
            jac[5][i] = zz
        else:
            jac[0][i] = zx
            jac[1][i] = zy
            jac[2][i] = zz
    return jac


def _chol_solve(a, b, r):
    """Solve a @ y = b for SPD a; returns None when not PD."""
    low = [[0.0] * r for _ in range(r)]
    for i in range(r):
        s = a[i][i]
        for k in range(i):
            s -= low[i][k] * low[i][k]
        if s <= 0.0:
            return None
        low[i][i] = math.sqrt(s)
        for j in range(i + 1, r):
            s2 = a[j][i]
            for k in range(i):
                s2 -= low[j][k] * low[i][k]
            low[j][i] = s2 / low[i][i]
    z = [0.0] * r
    for i in range(r):
        s = b[i]
        for k in range(i):
            s -= low[i][k] * z[k]
        z[i] = s / low[i][i]
    y = [0.0] * r
    for i in range(r - 1, -1, -1):
        s = z[i]
        for k in range(i + 1, r):
            s -= low[k][i] * y[k]
        y[i] = s / low[i][i]
    return y


def _error_vec(t, target, rows):
    e = []
    for row in rows:
        if row < 3:
            e.append(target[row] - t[row][3])
        else:  # yaw
            e.append(_wrap(target[3] - math.atan2(t[1][0], t[0][0])))
    return e


def _ik_core(jt, ax, org, tl, bs, q0, target, rows, qmin, qmax, tol, max_iters, damping):
    n = len(jt)
    r = len(rows)
    q = list(q0)
    err = math.inf
    lam2 = damping * damping
    for it in range(max_iters + 1):
        t, jpos, jaxis = _fk_frames(jt, ax, org, tl, bs, q)
        e = _error_vec(t, target, rows)
        s = 0.0
        for i in range(r):
            s += e[i] * e[i]
        err = math.sqrt(s)
        if err < tol:
            return q, err, it, True
        if it == max_iters:
            break
        jac = _jacobian_from_frames(jt, t, jpos, jaxis)
        jr = [jac[row] for row in rows]
        a = [[0.0] * r for _ in range(r)]
        for i in range(r):
            for j in range(r):
                s2 = 0.0
                for k in range(n):
                    s2 += jr[i][k] * jr[j][k]
                a[i][j] = s2
            a[i][i] += lam2
        y = _chol_solve(a, e, r)
        if y is None:
            break
        for k in range(n):
            dq = 0.0
            for i in range(r):
                dq += jr[i][k] * y[i]
            qk = q[k] + dq
            if qk < qmin[k]:
                qk = qmin[k]
            elif qk > qmax[k]:
                qk = qmax[k]
            q[k] = qk
    return q, err, max_iters, False


def _manip_core(jt, t, jpos, jaxis, rows):
    jac = _jacobian_from_frames(jt, t, jpos, jaxis)
    r = len(rows)
    n = len(jt)
    m = [[0.0] * r for _ in range(r)]
    for i in range(r):
        ji = jac[rows[i]]
        for j in range(r):
            jj = jac[rows[j]]
            s = 0.0
            for k in range(n):
                s += ji[k] * jj[k]
            m[i][j] = s
    # det via Cholesky; failure means rank-deficient
    det = 1.0
    low = [[0.0] * r for _ in range(r)]
    for i in range(r):
        s = m[i][i]
        for k in range(i):
            s -= low[i][k] * low[i][k]
        if s <= 0.0:
            return math.inf
        low[i][i] = math.sqrt(s)
        det *= s
        for j in range(i + 1, r):
            s2 = m[j][i]
            for k in range(i):
                s2 -= low[j][k] * low[i][k]
            low[j][i] = s2 / low[i][i]
    if det <= _SINGULARITY_EPS:
        return math.inf
    return 1.0 / math.sqrt(det)


# -- public backend API -----------------------------------------------------


def fk(jtypes, axes, origins, tool, base, q):
    """TCP transform as a 4x4 nested list."""
    jt, ax, org, tl, bs = _as_lists(jtypes, axes, origins, tool, base)
    t, _, _ = _fk_frames(jt, ax, org, tl, bs, [float(v) for v in q])
    return t


def jacobian(jtypes, axes, origins, tool, base, q):
    """Geometric Jacobian (rows: linear xyz, angular xyz) as nested lists."""
    jt, ax, org, tl, bs = _as_lists(jtypes, axes, origins, tool, base)
    t, jpos, jaxis = _fk_frames(jt, ax, org, tl, bs, [float(v) for v in q])
    return _jacobian_from_frames(jt, t, jpos, jaxis)


def ik_solve(jtypes, axes, origins, tool, base, q0, target, rows, qmin, qmax, tol, max_iters, damping):
    """Damped least-squares IK; returns (q, error, iterations, converged)."""
    jt, ax, org, tl, bs = _as_lists(jtypes, axes, origins, tool, base)
    return _ik_core(
        jt, ax, org, tl, bs,
        [float(v) for v in q0],
        [float(v) for v in target],
        [int(v) for v in rows],
        [float(v) for v in qmin],
        [float(v) for v in qmax],
        tol, int(max_iters), damping,
    )


def inverse_manip(jtypes, axes, origins, tool, base, q, rows):
    """1/sqrt(det(J_sel @ J_sel^T)); inf when (near) singular."""
    jt, ax, org, tl, bs = _as_lists(jtypes, axes, origins, tool, base)
    t, jpos, jaxis = _fk_frames(jt, ax, org, tl, bs, [float(v) for v in q])
    return _manip_core(jt, t, jpos, jaxis, [int(v) for v in rows])


def tvp_duration(distance, v_max, a_max):
    """Rest-to-rest trapezoidal/triangular profile duration."""
    if distance <= 0.0:
        return 0.0
    if distance >= v_max * v_max / a_max:
        return distance / v_max + v_max / a_max
    return 2.0 * math.sqrt(distance / a_max)


def tvp_sample(distance, v_max, a_max, t):
    """(position, velocity) at time t of the rest-to-rest profile."""
    if distance <= 0.0:
        return 0.0, 0.0
    d_star = v_max * v_max / a_max
    if distance >= d_star:
        t_acc = v_max / a_max
        total = distance / v_max + v_max / a_max
        if t <= t_acc:
            return 0.5 * a_max * t * t, a_max * t
        if t <= total - t_acc:
            return 0.5 * v_max * t_acc + v_max * (t - t_acc), v_max
        dt = total - t
        if dt < 0.0:
            dt = 0.0
        return distance - 0.5 * a_max * dt * dt, a_max * dt
    t_acc = math.sqrt(distance / a_max)
    total = 2.0 * t_acc
    if t <= t_acc:
        return 0.5 * a_max * t * t, a_max * t
    dt = total - t
    if dt < 0.0:
        dt = 0.0
    return distance - 0.5 * a_max * dt * dt, a_max * dt


def segment_metrics(jtypes, axes, origins, tool, base, q0, p0, p1, v, a, dt,
                    ik_rows, manip_rows, qmin, qmax, tol, max_iters, damping,
                    trace=None):
    """Track a straight TCP segment, sampling inverse manipulability.

    Samples sit at k*dt plus the exact segment end. Returns
    (duration, manip_sum, sample_count, q_end, ok); ok is False as soon
    as one sample's IK fails. ``trace``, when given, collects
    (t, x, y, z, manip) tuples.
    """
    jt, ax, org, tl, bs = _as_lists(jtypes, axes, origins, tool, base)
    q = [float(v_) for v_ in q0]
    rows_ik = [int(v_) for v_ in ik_rows]
    rows_m = [int(v_) for v_ in manip_rows]
    lo = [float(v_) for v_ in qmin]
    hi = [float(v_) for v_ in qmax]
    x0, y0, z0, yaw0 = (float(p0[0]), float(p0[1]), float(p0[2]), float(p0[3]))
    dx = float(p1[0]) - x0
    dy = float(p1[1]) - y0
    dz = float(p1[2]) - z0
    dist = math.sqrt(dx * dx + dy * dy + dz * dz)
    if dist <= 0.0:
        return 0.0, 0.0, 0, q, True
    dyaw = _wrap(float(p1[3]) - yaw0)
    duration = tvp_duration(dist, v, a)
    msum = 0.0
    count = 0
    target = [0.0, 0.0, 0.0, 0.0]
    k = 1
    while True:
        t = k * dt
        last = t >= duration
        if last:
            t = duration
        s, _ = tvp_sample(dist, v, a, t)
        u = s / dist
        target[0] = x0 + u * dx
        target[1] = y0 + u * dy
        target[2] = z0 + u * dz
        target[3] = yaw0 + u * dyaw
        q, err, _, ok = _ik_core(jt, ax, org, tl, bs, q, target, rows_ik, lo, hi, tol, max_iters, damping)
        if not ok:
            return duration, msum, count, q, False
        tcp, jpos, jaxis = _fk_frames(jt, ax, org, tl, bs, q)
        m = _manip_core(jt, tcp, jpos, jaxis, rows_m)
        msum += m
        count += 1
        if trace is not None:
            trace.append((t, target[0], target[1], target[2], m))
        if last:
            break
        k += 1
    return duration, msum, count, q, True
