# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend.

Operation-for-operation mirror of ``cellplan._kernel._purepy``; the build
disables floating-point contraction so both backends produce bit-identical
doubles. Chains are limited to 16 joints and 6 task rows.
"""

from libc.math cimport atan2, cos, fmod, sin, sqrt

BACKEND = "compiled"

cdef double INF = float("inf")
cdef double PI = 3.141592653589793
cdef double TWO_PI = 6.283185307179586
cdef double SINGULARITY_EPS = 1e-12

cdef enum:
    MAXJ = 16
    MAXR = 6


cdef inline double _wrap(double x) nogil:
    cdef double r = fmod(PI - x, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    return PI - r


cdef void _mat_mul4(double[4][4] a, double[4][4] b, double[4][4] out) nogil:
    cdef int i, j, k
    cdef double s
    for i in range(4):
        for j in range(4):
            s = 0.0
            for k in range(4):
                s += a[i][k] * b[k][j]
            out[i][j] = s


cdef void _joint_motion(int kind, double ax, double ay, double az, double q,
                        double[4][4] out) nogil:
    cdef double c, s, v
    cdef int i, j
    for i in range(4):
        for j in range(4):
            out[i][j] = 0.0
    out[3][3] = 1.0
    if kind == 0:  # revolute: Rodrigues rotation about the joint axis
        c = cos(q)
        s = sin(q)
        v = 1.0 - c
        out[0][0] = ax * ax * v + c
        out[0][1] = ax * ay * v - az * s
        out[0][2] = ax * az * v + ay * s
        out[1][0] = ax * ay * v + az * s
        out[1][1] = ay * ay * v + c
        out[1][2] = ay * az * v - ax * s
        out[2][0] = ax * az * v - ay * s
        out[2][1] = ay * az * v + ax * s
        out[2][2] = az * az * v + c
    else:
        out[0][0] = 1.0
        out[1][1] = 1.0
        out[2][2] = 1.0
        out[0][3] = ax * q
        out[1][3] = ay * q
        out[2][3] = az * q


cdef struct ChainC:
    int n
    int jt[MAXJ]
    double ax[MAXJ][3]
    double org[MAXJ][4][4]
    double tool[4][4]
    double base[4][4]


cdef int _load_chain(ChainC* ch, int[::1] jtypes, double[:, ::1] axes,
                     double[:, :, ::1] origins, double[:, ::1] tool,
                     double[:, ::1] base) except -1:
    cdef int i, r, c
    ch.n = jtypes.shape[0]
    if ch.n > MAXJ:
        raise ValueError("compiled kernel supports at most 16 joints")
    for i in range(ch.n):
        ch.jt[i] = jtypes[i]
        for r in range(3):
            ch.ax[i][r] = axes[i, r]
        for r in range(4):
            for c in range(4):
                ch.org[i][r][c] = origins[i, r, c]
    for r in range(4):
        for c in range(4):
            ch.tool[r][c] = tool[r, c]
            ch.base[r][c] = base[r, c]
    return 0


cdef void _fk_frames(ChainC* ch, double* q, double[4][4] t,
                     double[MAXJ][3] jpos, double[MAXJ][3] jaxis) nogil:
    cdef double[4][4] tmp
    cdef double[4][4] motion
    cdef int i, r, c
    cdef double wx, wy, wz
    for r in range(4):
        for c in range(4):
            t[r][c] = ch.base[r][c]
    for i in range(ch.n):
        _mat_mul4(t, ch.org[i], tmp)
        for r in range(4):
            for c in range(4):
                t[r][c] = tmp[r][c]
        wx = t[0][0] * ch.ax[i][0] + t[0][1] * ch.ax[i][1] + t[0][2] * ch.ax[i][2]
        wy = t[1][0] * ch.ax[i][0] + t[1][1] * ch.ax[i][1] + t[1][2] * ch.ax[i][2]
        wz = t[2][0] * ch.ax[i][0] + t[2][1] * ch.ax[i][1] + t[2][2] * ch.ax[i][2]
        jpos[i][0] = t[0][3]
        jpos[i][1] = t[1][3]
        jpos[i][2] = t[2][3]
        jaxis[i][0] = wx
        jaxis[i][1] = wy
        jaxis[i][2] = wz
        _joint_motion(ch.jt[i], ch.ax[i][0], ch.ax[i][1], ch.ax[i][2], q[i], motion)
        _mat_mul4(t, motion, tmp)
        for r in range(4):
            for c in range(4):
                t[r][c] = tmp[r][c]
    _mat_mul4(t, ch.tool, tmp)
    for r in range(4):
        for c in range(4):
            t[r][c] = tmp[r][c]


cdef void _jacobian_from_frames(ChainC* ch, double[4][4] t,
                                double[MAXJ][3] jpos, double[MAXJ][3] jaxis,
                                double[6][MAXJ] jac) nogil:
    cdef int i
    cdef double ex, ey, ez, zx, zy, zz, rx, ry, rz
    ex = t[0][3]
    ey = t[1][3]
    ez = t[2][3]
    for i in range(ch.n):
        zx = jaxis[i][0]
        zy = jaxis[i][1]
        zz = jaxis[i][2]
        jac[3][i] = 0.0
        jac[4][i] = 0.0
        jac[5][i] = 0.0
        if ch.jt[i] == 0:
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


cdef int _chol_solve(double[MAXR][MAXR] a, double* b, int r, double* y) nogil:
    """Solve a @ y = b for SPD a; returns 0 on success, -1 when not PD."""
    cdef double[MAXR][MAXR] low
    cdef double[MAXR] z
    cdef double s, s2
    cdef int i, j, k
    for i in range(r):
        s = a[i][i]
        for k in range(i):
            s -= low[i][k] * low[i][k]
        if s <= 0.0:
            return -1
        low[i][i] = sqrt(s)
        for j in range(i + 1, r):
            s2 = a[j][i]
            for k in range(i):
                s2 -= low[j][k] * low[i][k]
            low[j][i] = s2 / low[i][i]
    for i in range(r):
        s = b[i]
        for k in range(i):
            s -= low[i][k] * z[k]
        z[i] = s / low[i][i]
    for i in range(r - 1, -1, -1):
        s = z[i]
        for k in range(i + 1, r):
            s -= low[k][i] * y[k]
        y[i] = s / low[i][i]
    return 0


cdef void _error_vec(double[4][4] t, double* target, int* rows, int r,
                     double* e) nogil:
    cdef int i, row
    for i in range(r):
        row = rows[i]
        if row < 3:
            e[i] = target[row] - t[row][3]
        else:
            e[i] = _wrap(target[3] - atan2(t[1][0], t[0][0]))


cdef int _ik_core(ChainC* ch, double* q, double* target, int* rows, int r,
                  double* qmin, double* qmax, double tol, int max_iters,
                  double damping, double* err_out, int* iters_out) nogil:
    """Iterates in place; returns 1 on convergence, 0 otherwise."""
    cdef double[4][4] t
    cdef double[MAXJ][3] jpos
    cdef double[MAXJ][3] jaxis
    cdef double[6][MAXJ] jac
    cdef double[MAXR][MAXJ] jr
    cdef double[MAXR][MAXR] a
    cdef double[MAXR] e
    cdef double[MAXR] y
    cdef double s, s2, err, dq, qk
    cdef double lam2 = damping * damping
    cdef int it, i, j, k
    cdef int n = ch.n
    err = INF
    for it in range(max_iters + 1):
        _fk_frames(ch, q, t, jpos, jaxis)
        _error_vec(t, target, rows, r, e)
        s = 0.0
        for i in range(r):
            s += e[i] * e[i]
        err = sqrt(s)
        if err < tol:
            err_out[0] = err
            iters_out[0] = it
            return 1
        if it == max_iters:
            break
        _jacobian_from_frames(ch, t, jpos, jaxis, jac)
        for i in range(r):
            for k in range(n):
                jr[i][k] = jac[rows[i]][k]
        for i in range(r):
            for j in range(r):
                s2 = 0.0
                for k in range(n):
                    s2 += jr[i][k] * jr[j][k]
                a[i][j] = s2
            a[i][i] += lam2
        if _chol_solve(a, e, r, y) != 0:
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
    err_out[0] = err
    iters_out[0] = max_iters
    return 0


cdef double _manip_core(ChainC* ch, double[4][4] t, double[MAXJ][3] jpos,
                        double[MAXJ][3] jaxis, int* rows, int r) nogil:
    cdef double[6][MAXJ] jac
    cdef double[MAXR][MAXR] m
    cdef double[MAXR][MAXR] low
    cdef double s, s2, det
    cdef int i, j, k
    cdef int n = ch.n
    _jacobian_from_frames(ch, t, jpos, jaxis, jac)
    for i in range(r):
        for j in range(r):
            s = 0.0
            for k in range(n):
                s += jac[rows[i]][k] * jac[rows[j]][k]
            m[i][j] = s
    det = 1.0
    for i in range(r):
        s = m[i][i]
        for k in range(i):
            s -= low[i][k] * low[i][k]
        if s <= 0.0:
            return INF
        low[i][i] = sqrt(s)
        det *= s
        for j in range(i + 1, r):
            s2 = m[j][i]
            for k in range(i):
                s2 -= low[j][k] * low[i][k]
            low[j][i] = s2 / low[i][i]
    if det <= SINGULARITY_EPS:
        return INF
    return 1.0 / sqrt(det)


cdef double _tvp_duration_c(double distance, double v_max, double a_max) nogil:
    if distance <= 0.0:
        return 0.0
    if distance >= v_max * v_max / a_max:
        return distance / v_max + v_max / a_max
    return 2.0 * sqrt(distance / a_max)


cdef void _tvp_sample_c(double distance, double v_max, double a_max, double t,
                        double* pos, double* vel) nogil:
    cdef double d_star, t_acc, total, dt
    if distance <= 0.0:
        pos[0] = 0.0
        vel[0] = 0.0
        return
    d_star = v_max * v_max / a_max
    if distance >= d_star:
        t_acc = v_max / a_max
        total = distance / v_max + v_max / a_max
        if t <= t_acc:
            pos[0] = 0.5 * a_max * t * t
            vel[0] = a_max * t
            return
        if t <= total - t_acc:
            pos[0] = 0.5 * v_max * t_acc + v_max * (t - t_acc)
            vel[0] = v_max
            return
        dt = total - t
        if dt < 0.0:
            dt = 0.0
        pos[0] = distance - 0.5 * a_max * dt * dt
        vel[0] = a_max * dt
        return
    t_acc = sqrt(distance / a_max)
    total = 2.0 * t_acc
    if t <= t_acc:
        pos[0] = 0.5 * a_max * t * t
        vel[0] = a_max * t
        return
    dt = total - t
    if dt < 0.0:
        dt = 0.0
    pos[0] = distance - 0.5 * a_max * dt * dt
    vel[0] = a_max * dt


# -- public backend API -----------------------------------------------------


def fk(int[::1] jtypes, double[:, ::1] axes, double[:, :, ::1] origins,
       double[:, ::1] tool, double[:, ::1] base, double[::1] q):
    """TCP transform as a 4x4 nested list."""
    cdef ChainC ch
    cdef double[4][4] t
    cdef double[MAXJ][3] jpos
    cdef double[MAXJ][3] jaxis
    cdef double[MAXJ] qc
    cdef int i
    _load_chain(&ch, jtypes, axes, origins, tool, base)
    for i in range(ch.n):
        qc[i] = q[i]
    _fk_frames(&ch, qc, t, jpos, jaxis)
    return [[t[r][c] for c in range(4)] for r in range(4)]


def jacobian(int[::1] jtypes, double[:, ::1] axes, double[:, :, ::1] origins,
             double[:, ::1] tool, double[:, ::1] base, double[::1] q):
    """Geometric Jacobian (rows: linear xyz, angular xyz) as nested lists."""
    cdef ChainC ch
    cdef double[4][4] t
    cdef double[MAXJ][3] jpos
    cdef double[MAXJ][3] jaxis
    cdef double[6][MAXJ] jac
    cdef double[MAXJ] qc
    cdef int i
    _load_chain(&ch, jtypes, axes, origins, tool, base)
    for i in range(ch.n):
        qc[i] = q[i]
    _fk_frames(&ch, qc, t, jpos, jaxis)
    _jacobian_from_frames(&ch, t, jpos, jaxis, jac)
    return [[jac[r][i] for i in range(ch.n)] for r in range(6)]


def ik_solve(int[::1] jtypes, double[:, ::1] axes, double[:, :, ::1] origins,
             double[:, ::1] tool, double[:, ::1] base, double[::1] q0,
             double[::1] target, int[::1] rows, double[::1] qmin,
             double[::1] qmax, double tol, int max_iters, double damping):
    """Damped least-squares IK; returns (q, error, iterations, converged)."""
    cdef ChainC ch
    cdef double[MAXJ] q
    cdef double[4] tg
    cdef int[MAXR] rw
    cdef double[MAXJ] lo
    cdef double[MAXJ] hi
    cdef double err = 0.0
    cdef int iters = 0
    cdef int i, ok
    cdef int r = rows.shape[0]
    _load_chain(&ch, jtypes, axes, origins, tool, base)
    for i in range(ch.n):
        q[i] = q0[i]
        lo[i] = qmin[i]
        hi[i] = qmax[i]
    for i in range(4):
        tg[i] = target[i]
    for i in range(r):
        rw[i] = rows[i]
    ok = _ik_core(&ch, q, tg, rw, r, lo, hi, tol, max_iters, damping, &err, &iters)
    return [q[i] for i in range(ch.n)], err, iters, ok == 1


def inverse_manip(int[::1] jtypes, double[:, ::1] axes, double[:, :, ::1] origins,
                  double[:, ::1] tool, double[:, ::1] base, double[::1] q,
                  int[::1] rows):
    """1/sqrt(det(J_sel @ J_sel^T)); inf when (near) singular."""
    cdef ChainC ch
    cdef double[4][4] t
    cdef double[MAXJ][3] jpos
    cdef double[MAXJ][3] jaxis
    cdef double[MAXJ] qc
    cdef int[MAXR] rw
    cdef int i
    cdef int r = rows.shape[0]
    _load_chain(&ch, jtypes, axes, origins, tool, base)
    for i in range(ch.n):
        qc[i] = q[i]
    for i in range(r):
        rw[i] = rows[i]
    _fk_frames(&ch, qc, t, jpos, jaxis)
    return _manip_core(&ch, t, jpos, jaxis, rw, r)


def tvp_duration(double distance, double v_max, double a_max):
    """Rest-to-rest trapezoidal/triangular profile duration."""
    return _tvp_duration_c(distance, v_max, a_max)


def tvp_sample(double distance, double v_max, double a_max, double t):
    """(position, velocity) at time t of the rest-to-rest profile."""
    cdef double pos = 0.0
    cdef double vel = 0.0
    _tvp_sample_c(distance, v_max, a_max, t, &pos, &vel)
    return pos, vel


def segment_metrics(int[::1] jtypes, double[:, ::1] axes, double[:, :, ::1] origins,
                    double[:, ::1] tool, double[:, ::1] base, double[::1] q0,
                    double[::1] p0, double[::1] p1, double v, double a, double dt,
                    int[::1] ik_rows, int[::1] manip_rows, double[::1] qmin,
                    double[::1] qmax, double tol, int max_iters, double damping,
                    trace=None):
    """Track a straight TCP segment, sampling inverse manipulability.

    Samples sit at k*dt plus the exact segment end. Returns
    (duration, manip_sum, sample_count, q_end, ok); ok is False as soon
    as one sample's IK fails. ``trace``, when given, collects
    (t, x, y, z, manip) tuples.
    """
    cdef ChainC ch
    cdef double[MAXJ] q
    cdef double[MAXJ] lo
    cdef double[MAXJ] hi
    cdef int[MAXR] rik
    cdef int[MAXR] rm
    cdef double[4] target
    cdef double[4][4] tcp
    cdef double[MAXJ][3] jpos
    cdef double[MAXJ][3] jaxis
    cdef double x0, y0, z0, yaw0, dx, dy, dz, dist, dyaw, duration
    cdef double msum, t, s, vel, u, m, err
    cdef int i, count, iters, ok, last
    cdef long k
    cdef int nik = ik_rows.shape[0]
    cdef int nm = manip_rows.shape[0]
    _load_chain(&ch, jtypes, axes, origins, tool, base)
    for i in range(ch.n):
        q[i] = q0[i]
        lo[i] = qmin[i]
        hi[i] = qmax[i]
    for i in range(nik):
        rik[i] = ik_rows[i]
    for i in range(nm):
        rm[i] = manip_rows[i]
    x0 = p0[0]
    y0 = p0[1]
    z0 = p0[2]
    yaw0 = p0[3]
    dx = p1[0] - x0
    dy = p1[1] - y0
    dz = p1[2] - z0
    dist = sqrt(dx * dx + dy * dy + dz * dz)
    if dist <= 0.0:
        return 0.0, 0.0, 0, [q[i] for i in range(ch.n)], True
    dyaw = _wrap(p1[3] - yaw0)
    duration = _tvp_duration_c(dist, v, a)
    msum = 0.0
    count = 0
    k = 1
    while True:
        t = k * dt
        last = 1 if t >= duration else 0
        if last:
            t = duration
        _tvp_sample_c(dist, v, a, t, &s, &vel)
        u = s / dist
        target[0] = x0 + u * dx
        target[1] = y0 + u * dy
        target[2] = z0 + u * dz
        target[3] = yaw0 + u * dyaw
        ok = _ik_core(&ch, q, target, rik, nik, lo, hi, tol, max_iters, damping, &err, &iters)
        if ok != 1:
            return duration, msum, count, [q[i] for i in range(ch.n)], False
        _fk_frames(&ch, q, tcp, jpos, jaxis)
        m = _manip_core(&ch, tcp, jpos, jaxis, rm, nm)
        msum += m
        count += 1
        if trace is not None:
            trace.append((t, target[0], target[1], target[2], m))
        if last:
            break
        k += 1
    return duration, msum, count, [q[i] for i in range(ch.n)], True
