# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled census kernel.

Same contract as ``algcensus._pykernel.census_shard``.  All arithmetic is on
128-bit integers with explicit overflow checks; a vector whose Sturm chain or
evaluation would overflow is handed back in the last returned list so the
caller can finish it with Python integers.  Degrees above MAXN are rejected.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    typedef __int128 i128;
    static inline int ovf_mul(i128 a, i128 b, i128 *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int ovf_add(i128 a, i128 b, i128 *r) { return __builtin_add_overflow(a, b, r); }
    static inline int ovf_sub(i128 a, i128 b, i128 *r) { return __builtin_sub_overflow(a, b, r); }
    """
    ctypedef long long i128
    bint ovf_mul(i128 a, i128 b, i128 *r) nogil
    bint ovf_add(i128 a, i128 b, i128 *r) nogil
    bint ovf_sub(i128 a, i128 b, i128 *r) nogil

BACKEND = "cython"

cdef enum:
    MAXN = 5
    MAXDIV = 512

cdef struct Chain:
    int length
    int deg[MAXN + 2]
    i128 c[MAXN + 2][MAXN + 1]

cdef struct Edges:
    int count
    int *kind
    long long *u
    long long *v

MAX_DEGREE = MAXN


cdef inline i128 iabs(i128 x) nogil:
    return -x if x < 0 else x


cdef inline i128 igcd(i128 a, i128 b) nogil:
    cdef i128 t
    a = iabs(a)
    b = iabs(b)
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef void make_primitive(i128 *c, int d) nogil:
    cdef i128 g = 0
    cdef int i
    for i in range(d + 1):
        g = igcd(g, c[i])
        if g == 1:
            return
    if g > 1:
        for i in range(d + 1):
            c[i] = c[i] // g


cdef int neg_prem(const i128 *a, int da, const i128 *b, int db, i128 *out, int *dout) nogil:
    """out = -(positive multiple of a mod b), reduced to primitive part. 1 on overflow."""
    cdef i128 r[MAXN + 1]
    cdef i128 scale = iabs(b[db])
    cdef i128 sgn = 1 if b[db] > 0 else -1
    cdef i128 top, t
    cdef int d = da, i, j, shift
    for i in range(da + 1):
        r[i] = a[i]
    while d >= db:
        top = r[d]
        if top != 0:
            shift = d - db
            for i in range(d):
                if ovf_mul(r[i], scale, &r[i]):
                    return 1
            for j in range(db):
                if ovf_mul(sgn * top, b[j], &t):
                    return 1
                if ovf_sub(r[shift + j], t, &r[shift + j]):
                    return 1
            r[d] = 0
            make_primitive(r, d - 1)
        d -= 1
    while d >= 0 and r[d] == 0:
        d -= 1
    for i in range(d + 1):
        out[i] = -r[i]
    dout[0] = d
    return 0


cdef int build_chain(const long long *a, int n, Chain *ch) nogil:
    """0 ok, 1 overflow, 2 not squarefree."""
    cdef int i, k, rc
    for i in range(n + 1):
        ch.c[0][i] = a[i]
    ch.deg[0] = n
    for i in range(1, n + 1):
        ch.c[1][i - 1] = <i128>i * a[i]
    ch.deg[1] = n - 1
    make_primitive(ch.c[1], n - 1)
    ch.length = 2
    while ch.deg[ch.length - 1] > 0:
        k = ch.length
        rc = neg_prem(ch.c[k - 2], ch.deg[k - 2], ch.c[k - 1], ch.deg[k - 1], ch.c[k], &ch.deg[k])
        if rc:
            return 1
        if ch.deg[k] < 0:
            return 2
        make_primitive(ch.c[k], ch.deg[k])
        ch.length = k + 1
    return 0


cdef inline int sgn128(i128 x) nogil:
    return (x > 0) - (x < 0)


cdef int variations_at(Chain *ch, int kind, long long u, long long v) nogil:
    """Sign variations of the chain at an edge; -1 on overflow."""
    cdef int count = 0, last = 0, s, idx, d, i
    cdef i128 acc, vp, t
    for idx in range(ch.length):
        d = ch.deg[idx]
        if kind != 0:
            s = sgn128(ch.c[idx][d])
            if kind < 0 and d % 2:
                s = -s
        else:
            acc = ch.c[idx][d]
            vp = 1
            for i in range(d - 1, -1, -1):
                if ovf_mul(vp, v, &vp):
                    return -1
                if ovf_mul(acc, u, &acc):
                    return -1
                if ovf_mul(ch.c[idx][i], vp, &t):
                    return -1
                if ovf_add(acc, t, &acc):
                    return -1
            s = sgn128(acc)
        if s != 0:
            if last != 0 and s != last:
                count += 1
            last = s
    return count


cdef int locate(Chain *ch, Edges *e, int lo, int hi, int vlo, int vhi,
                int *didx, int *dval, int *dn, int nbins, bint rev) nogil:
    """Record (bin, count) pairs for the roots in (e_lo, e_hi]; 1 on overflow."""
    cdef int mid, vmid
    if vlo == vhi:
        return 0
    if hi - lo == 1:
        didx[dn[0]] = nbins - 1 - lo if rev else lo
        dval[dn[0]] = vlo - vhi
        dn[0] += 1
        return 0
    mid = (lo + hi) // 2
    vmid = variations_at(ch, e.kind[mid], e.u[mid], e.v[mid])
    if vmid < 0:
        return 1
    if locate(ch, e, lo, mid, vlo, vmid, didx, dval, dn, nbins, rev):
        return 1
    return locate(ch, e, mid, hi, vmid, vhi, didx, dval, dn, nbins, rev)


cdef int divisor_list(i128 m, i128 *out) nogil:
    """Positive divisors of |m| (m != 0); returns count, or -1 if the table is too small."""
    cdef i128 d = 1
    cdef int cnt = 0
    m = iabs(m)
    while d * d <= m:
        if m % d == 0:
            if cnt + 2 > MAXDIV:
                return -1
            out[cnt] = d
            cnt += 1
            if d * d != m:
                out[cnt] = m // d
                cnt += 1
        d += 1
    return cnt


cdef int homog_value(const long long *a, int n, i128 u, i128 v, i128 *res) nogil:
    """res = v^n p(u/v); 1 on overflow."""
    cdef i128 acc = a[n], vp = 1, t
    cdef int i
    for i in range(n - 1, -1, -1):
        if ovf_mul(vp, v, &vp):
            return 1
        if ovf_mul(acc, u, &acc):
            return 1
        if ovf_mul(<i128>a[i], vp, &t):
            return 1
        if ovf_add(acc, t, &acc):
            return 1
    res[0] = acc
    return 0


cdef int quad_divides(const long long *a, int n, i128 c0, i128 c1, i128 c2) nogil:
    cdef i128 r[MAXN + 1]
    cdef i128 q
    cdef int i, top
    for i in range(n + 1):
        r[i] = a[i]
    for top in range(n, 1, -1):
        if r[top] == 0:
            continue
        if r[top] % c2:
            return 0
        q = r[top] // c2
        r[top] = 0
        r[top - 1] -= q * c1
        r[top - 2] -= q * c0
    return r[1] == 0 and r[0] == 0


cdef int irreducible(const long long *a, int n, i128 *d0, i128 *d1, i128 *d2) nogil:
    """1 irreducible, 0 reducible, -1 could not decide (overflow / table size)."""
    cdef i128 disc, s, val, p1, pm1, p2, pm2, c0, c1, c2, f2, fm2, s1, sm, r, q
    cdef int n0, n1, n2, i, j, k, si, sj
    if n == 1:
        return 1
    if a[0] == 0:
        return 0
    if n == 2:
        disc = <i128>a[1] * a[1] - <i128>4 * a[2] * a[0]
        if disc < 0:
            return 1
        s = <i128>(<double>disc) ** 0.5
        while s * s > disc:
            s -= 1
        while (s + 1) * (s + 1) <= disc:
            s += 1
        return 1 if s * s != disc else 0
    # rational root test
    n0 = divisor_list(a[n], d0)
    n1 = divisor_list(a[0], d1)
    if n0 < 0 or n1 < 0:
        return -1
    for i in range(n0):
        q = d0[i]
        for j in range(n1):
            r = d1[j]
            if igcd(r, q) != 1:
                continue
            if homog_value(a, n, r, q, &val):
                return -1
            if val == 0:
                return 0
            if homog_value(a, n, -r, q, &val):
                return -1
            if val == 0:
                return 0
    if n == 3:
        return 1
    if n > 5:
        return -1
    # quadratic factor via Kronecker at x = 0, 1, -1; filters at x = 2, -2
    if homog_value(a, n, 1, 1, &p1) or homog_value(a, n, -1, 1, &pm1):
        return -1
    if homog_value(a, n, 2, 1, &p2) or homog_value(a, n, -2, 1, &pm2):
        return -1
    n0 = divisor_list(a[0], d0)
    n1 = divisor_list(p1, d1)
    n2 = divisor_list(pm1, d2)
    if n0 < 0 or n1 < 0 or n2 < 0:
        return -1
    for i in range(n0):
        c0 = d0[i]
        for j in range(n1):
            for si in range(2):
                s1 = d1[j] if si == 0 else -d1[j]
                for k in range(n2):
                    for sj in range(2):
                        sm = d2[k] if sj == 0 else -d2[k]
                        if (s1 - sm) & 1:
                            continue
                        c1 = (s1 - sm) // 2
                        c2 = (s1 + sm) // 2 - c0
                        if c2 == 0 or a[n] % c2:
                            continue
                        f2 = 4 * c2 + 2 * c1 + c0
                        if f2 == 0 or p2 % f2:
                            continue
                        fm2 = 4 * c2 - 2 * c1 + c0
                        if fm2 == 0 or pm2 % fm2:
                            continue
                        if quad_divides(a, n, c0, c1, c2):
                            return 0
    return 1


cdef inline int pair_status(const long long *a, int n) nogil:
    cdef int i = n - 1
    while i >= 0:
        if a[i] > 0:
            return 1
        if a[i] < 0:
            return -1
        i -= 2
    return 0


cdef inline long long gcd_vec(const long long *a, int n) nogil:
    cdef i128 g = 0
    cdef int i
    for i in range(n + 1):
        g = igcd(g, a[i])
        if g == 1:
            return 1
    return <long long>g


def census_shard(int n, long long Q, long long lead_lo, long long lead_hi,
                 kinds, us, vs, bint pair, bint collect):
    if n < 1 or n > MAXN:
        raise ValueError(f"compiled kernel supports degrees 1..{MAXN}")
    cdef int m = len(kinds)
    cdef int nbins = m - 1
    cdef int i, status, rc, real, k0, k2, v0, vm, w0, wm, irr, dn = 0
    cdef int didx[2 * MAXN]
    cdef int dval[2 * MAXN]
    cdef long long weight, hh
    cdef long long a[MAXN + 1]
    cdef long long mir[MAXN + 1]
    cdef bint mirrored, done, bad
    cdef Chain ch
    cdef Edges e, ne
    cdef i128 *d0 = <i128 *>malloc(3 * MAXDIV * sizeof(i128))
    cdef long long *bins = <long long *>malloc((nbins + 1) * sizeof(long long))
    cdef long long *by_k = <long long *>malloc((n + 1) * sizeof(long long))
    cdef long long *pbh = <long long *>malloc((Q + 1) * sizeof(long long))
    cdef long long *rbh = <long long *>malloc((Q + 1) * sizeof(long long))
    e.count = m
    ne.count = m
    e.kind = <int *>malloc(m * sizeof(int))
    e.u = <long long *>malloc(m * sizeof(long long))
    e.v = <long long *>malloc(m * sizeof(long long))
    ne.kind = <int *>malloc(m * sizeof(int))
    ne.u = <long long *>malloc(m * sizeof(long long))
    ne.v = <long long *>malloc(m * sizeof(long long))
    collected = []
    overflow = []
    try:
        for i in range(m):
            e.kind[i] = kinds[i]
            e.u[i] = us[i]
            e.v[i] = vs[i]
        for i in range(m):
            ne.kind[i] = -e.kind[m - 1 - i]
            ne.u[i] = -e.u[m - 1 - i]
            ne.v[i] = e.v[m - 1 - i]
        for i in range(nbins + 1):
            bins[i] = 0
        for i in range(n + 1):
            by_k[i] = 0
        for i in range(Q + 1):
            pbh[i] = 0
            rbh[i] = 0

        for i in range(n):
            a[i] = -Q
        a[n] = lead_lo
        if lead_lo > lead_hi:
            done = True
        else:
            done = False
        with nogil:
            while not done:
                bad = False
                mirrored = False
                status = pair_status(a, n) if pair else 0
                if status >= 0 and gcd_vec(a, n) == 1:
                    mirrored = status > 0
                    irr = irreducible(a, n, d0, d0 + MAXDIV, d0 + 2 * MAXDIV)
                    if irr < 0:
                        bad = True
                    elif irr == 1:
                        rc = build_chain(a, n, &ch)
                        if rc != 0:
                            bad = True
                        else:
                            real = variations_at(&ch, -1, 0, 1) - variations_at(&ch, 1, 0, 1)
                            v0 = variations_at(&ch, e.kind[0], e.u[0], e.v[0])
                            vm = variations_at(&ch, e.kind[m - 1], e.u[m - 1], e.v[m - 1])
                            w0 = 0
                            wm = 0
                            if mirrored:
                                w0 = variations_at(&ch, ne.kind[0], ne.u[0], ne.v[0])
                                wm = variations_at(&ch, ne.kind[m - 1], ne.u[m - 1], ne.v[m - 1])
                            if v0 < 0 or vm < 0 or w0 < 0 or wm < 0:
                                bad = True
                            else:
                                k0 = v0 - vm
                                k2 = w0 - wm
                                dn = 0
                                if k0 and locate(&ch, &e, 0, m - 1, v0, vm, didx, dval, &dn, nbins, False):
                                    bad = True
                                elif mirrored and k2 and locate(&ch, &ne, 0, m - 1, w0, wm, didx, dval, &dn, nbins, True):
                                    bad = True
                            if not bad:
                                for i in range(dn):
                                    bins[didx[i]] += dval[i]
                                weight = 2 if mirrored else 1
                                hh = 0
                                for i in range(n + 1):
                                    if a[i] > hh:
                                        hh = a[i]
                                    elif -a[i] > hh:
                                        hh = -a[i]
                                pbh[hh] += weight
                                rbh[hh] += weight * real
                                by_k[k0] += 1
                                if mirrored:
                                    by_k[k2] += 1
                                if collect and (k0 or (mirrored and k2)):
                                    with gil:
                                        if k0:
                                            collected.append(tuple([a[i] for i in range(n + 1)]))
                                        if mirrored and k2:
                                            for i in range(n + 1):
                                                mir[i] = a[i] if (n - i) % 2 == 0 else -a[i]
                                            collected.append(tuple([mir[i] for i in range(n + 1)]))
                if bad:
                    with gil:
                        overflow.append(tuple([a[i] for i in range(n + 1)]))
                # odometer over a[0..n-1], then the leading coefficient
                i = 0
                while i < n:
                    if a[i] < Q:
                        a[i] += 1
                        break
                    a[i] = -Q
                    i += 1
                if i == n:
                    if a[n] < lead_hi:
                        a[n] += 1
                    else:
                        done = True
        return ([bins[i] for i in range(nbins)], [by_k[i] for i in range(n + 1)],
                [pbh[i] for i in range(Q + 1)], [rbh[i] for i in range(Q + 1)],
                collected, overflow)
    finally:
        free(d0)
        free(bins)
        free(by_k)
        free(pbh)
        free(rbh)
        free(e.kind)
        free(e.u)
        free(e.v)
        free(ne.kind)
        free(ne.u)
        free(ne.v)
