"""Double-double arithmetic (about 106 bits) on pairs of float64.

The primitives are written once and instantiated twice by ``build``: as
plain functions, which broadcast over numpy arrays, and as numba-compiled
scalar functions for the loop kernels.
"""
from types import SimpleNamespace

_SPLIT = 134217729.0  # 2**27 + 1


def build(jit):
    @jit
    def two_sum(a, b):
        s = a + b
        bb = s - a
        return s, (a - (s - bb)) + (b - bb)

    @jit
    def quick_two_sum(a, b):
        s = a + b
        return s, b - (s - a)

    @jit
    def two_prod(a, b):
        p = a * b
        t = _SPLIT * a
        ah = t - (t - a)
        al = a - ah
        t = _SPLIT * b
        bh = t - (t - b)
        bl = b - bh
        return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl

    @jit
    def add(ah, al, bh, bl):
        s, e = two_sum(ah, bh)
        t, f = two_sum(al, bl)
        e = e + t
        s, e = quick_two_sum(s, e)
        e = e + f
        return quick_two_sum(s, e)

    @jit
    def mul(ah, al, bh, bl):
        p, e = two_prod(ah, bh)
        e = e + (ah * bl + al * bh)
        return quick_two_sum(p, e)

    @jit
    def div(ah, al, bh, bl):
        q1 = ah / bh
        ph, pl = mul(q1, 0.0 * q1, bh, bl)
        rh, rl = add(ah, al, -ph, -pl)
        q2 = rh / bh
        ph, pl = mul(q2, 0.0 * q2, bh, bl)
        rh, rl = add(rh, rl, -ph, -pl)
        q3 = rh / bh
        q1, q2 = quick_two_sum(q1, q2)
        return add(q1, q2, q3, 0.0 * q3)

    @jit
    def cmul(arh, arl, aih, ail, brh, brl, bih, bil):
        # (ar + i ai)(br + i bi)
        h1, l1 = mul(arh, arl, brh, brl)
        h2, l2 = mul(aih, ail, bih, bil)
        rh, rl = add(h1, l1, -h2, -l2)
        h1, l1 = mul(arh, arl, bih, bil)
        h2, l2 = mul(aih, ail, brh, brl)
        ih, il = add(h1, l1, h2, l2)
        return rh, rl, ih, il

    @jit
    def g_factor(xrh, xrl, xih, xil):
        # x/(x - 1) = 1 + conj(d)/|d|^2 with d = x - 1; also returns |d|^2
        drh, drl = add(xrh, xrl, -1.0, 0.0 * xrl)
        h1, l1 = mul(drh, drl, drh, drl)
        h2, l2 = mul(xih, xil, xih, xil)
        nh, nl = add(h1, l1, h2, l2)
        qh, ql = div(drh, drl, nh, nl)
        grh, grl = add(qh, ql, 1.0, 0.0 * ql)
        gih, gil = div(-xih, -xil, nh, nl)
        return grh, grl, gih, gil, nh

    return SimpleNamespace(two_sum=two_sum, quick_two_sum=quick_two_sum,
                           two_prod=two_prod, add=add, mul=mul, div=div,
                           cmul=cmul, g_factor=g_factor)


plain = build(lambda f: f)
