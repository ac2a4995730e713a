"""Membership predicates for the asymptotic-region system.

Exponent tuples (t₁,…,t_d), d ≤ 8, are classified against:

  T₀(m₁,m₂)        17/35 ≤ m₁ ≤ 18/35  or same for m₂ or m₁+m₂
  T₁(m₁,m₂)        m₁ ≤ 18/35, m₂ ≤ 9/35
  T₂₁(m₁,m₂,m₃)    m₁ ≤ 18/35, m₂ ≥ m₃, ¾m₂+m₃ ≤ 9/35, m₂+½m₃ ≤ 9/35,
                   7/4·m₂ + 3/2·m₃ ≤ 18/35
  T₂₂(m₁,m₂,m₃)    m₁ ≤ 18/35, m₂ ≤ 9/35, m₃ ≤ 9/140
  T₂₃(m₁,m₂,m₃)    m₁ ≤ 18/35, 2m₂+m₃ ≤ 18/35, m₃ ≤ 9/70
  T₂ = T₂₁ ∪ T₂₂ ∪ T₂₃

  I_d   the tuple can be split into two covering groups whose sums lie in T₀;
        equivalent to: some nonempty subset of components sums into
        [17/35, 18/35] (the subset-window form used here).
  J_d   some ordered 2-coloring lands in T₁, or some ordered 3-coloring
        lands in T₂.  All 2^d + 3^d assignments are enumerated.

  L(m,n)   (m,n) ∉ T₀, (m,n,n) ∉ J₃, and n ≥ 53/255 or m ≥ 1129/2448
           or ½m + n ≥ 9361/24480
  M(m,n)   (m,n) ∉ T₀, (m,n,n) ∈ J₃
  N(m,n)   (m,n) ∉ T₀ ∪ L, (m,n,n) ∉ J₃

plus the 21 loss-region ledgers UM1…UM7, UN01…UN14.

Partition semantics: groups cover all components and may be empty (an empty
group sums to 0, satisfying every "≤" constraint vacuously; it corresponds
to a trivial factor in the underlying factorizations).  The strict
convention — every group nonempty — is available via semantics="nonempty"
and is exercised by the sensitivity report.

Scalar predicates compare against exact rational thresholds, so Fraction
inputs are decided exactly; float inputs are decided exactly relative to the
rational thresholds as well (Python compares float vs Fraction exactly).
The _v suffixed functions are vectorized float64 twins used by the sampler.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np

EMPTY = "empty"
NONEMPTY = "nonempty"

# Exact rational thresholds.
R_17_35 = Fraction(17, 35)
R_18_35 = Fraction(18, 35)
R_9_35 = Fraction(9, 35)
R_9_140 = Fraction(9, 140)
R_9_70 = Fraction(9, 70)
R_1_35 = Fraction(1, 35)
R_53_255 = Fraction(53, 255)
R_1129_2448 = Fraction(1129, 2448)
R_9361_24480 = Fraction(9361, 24480)

# float64 mirrors for the vector path
F_17_35 = float(R_17_35)
F_18_35 = float(R_18_35)
F_9_35 = float(R_9_35)
F_9_140 = float(R_9_140)
F_9_70 = float(R_9_70)
F_1_35 = float(R_1_35)
F_53_255 = float(R_53_255)
F_1129_2448 = float(R_1129_2448)
F_9361_24480 = float(R_9361_24480)

MAX_DIM = 8


class RegionUsageError(ValueError):
    """Unknown region name or argument count mismatch."""


def _check_dim(t, lo: int = 1) -> tuple:
    t = tuple(t)
    if not (lo <= len(t) <= MAX_DIM):
        raise RegionUsageError(f"tuple dimension must be in [{lo}, {MAX_DIM}], got {len(t)}")
    return t


# ───────────────────────── scalar predicates ─────────────────────────

def in_T0(m1, m2) -> bool:
    return (
        R_17_35 <= m1 <= R_18_35
        or R_17_35 <= m2 <= R_18_35
        or R_17_35 <= m1 + m2 <= R_18_35
    )


def in_T1(m1, m2) -> bool:
    return m1 <= R_18_35 and m2 <= R_9_35


def in_T21(m1, m2, m3) -> bool:
    return (
        m1 <= R_18_35
        and m2 >= m3
        and Fraction(3, 4) * m2 + m3 <= R_9_35
        and m2 + Fraction(1, 2) * m3 <= R_9_35
        and Fraction(7, 4) * m2 + Fraction(3, 2) * m3 <= R_18_35
    )


def in_T22(m1, m2, m3) -> bool:
    return m1 <= R_18_35 and m2 <= R_9_35 and m3 <= R_9_140


def in_T23(m1, m2, m3) -> bool:
    return m1 <= R_18_35 and 2 * m2 + m3 <= R_18_35 and m3 <= R_9_70


def in_T2(m1, m2, m3) -> bool:
    return in_T21(m1, m2, m3) or in_T22(m1, m2, m3) or in_T23(m1, m2, m3)


def in_I(t, semantics: str = EMPTY) -> bool:
    """Subset-window form: some nonempty subset sums into [17/35, 18/35].

    With nonempty semantics the explicit 2-coloring form over proper subsets
    is used instead (no valid partition exists for d = 1).
    """
    t = _check_dim(t)
    d = len(t)
    if semantics == EMPTY:
        for mask in range(1, 1 << d):
            s = sum(t[i] for i in range(d) if mask >> i & 1)
            if R_17_35 <= s <= R_18_35:
                return True
        return False
    total = sum(t)
    for mask in range(1, (1 << d) - 1):
        s = sum(t[i] for i in range(d) if mask >> i & 1)
        if in_T0(s, total - s):
            return True
    return False


def in_I_two_coloring(t, semantics: str = EMPTY) -> bool:
    """Literal 2-coloring form of I membership; oracle for the window form."""
    t = _check_dim(t)
    d = len(t)
    total = sum(t)
    lo = 0 if semantics == EMPTY else 1
    hi = (1 << d) if semantics == EMPTY else (1 << d) - 1
    for mask in range(lo, hi):
        s = sum(t[i] for i in range(d) if mask >> i & 1)
        if in_T0(s, total - s):
            return True
    return False


def in_J(t, semantics: str = EMPTY) -> bool:
    """Ordered 2-colorings against T₁, then ordered 3-colorings against T₂."""
    t = _check_dim(t)
    d = len(t)
    total = sum(t)
    strict = semantics != EMPTY
    lo = 1 if strict else 0
    hi = (1 << d) - 1 if strict else (1 << d)
    for mask in range(lo, hi):
        s = sum(t[i] for i in range(d) if mask >> i & 1)
        if in_T1(s, total - s):
            return True
    for colors in product((0, 1, 2), repeat=d):
        if strict and len(set(colors)) < 3:
            continue
        # Group sums are accumulated from the components themselves, not as
        # total − s1 − s2: repeated components sit exactly on T₂₁'s m₂ ≥ m₃
        # boundary and must not be perturbed by roundoff.
        s1 = sum(x for x, c in zip(t, colors) if c == 0)
        s2 = sum(x for x, c in zip(t, colors) if c == 1)
        s3 = sum(x for x, c in zip(t, colors) if c == 2)
        if in_T2(s1, s2, s3):
            return True
    return False


def _l_thresholds(m, n) -> bool:
    return n >= R_53_255 or m >= R_1129_2448 or Fraction(1, 2) * m + n >= R_9361_24480


def in_L(m, n, semantics: str = EMPTY) -> bool:
    return (
        not in_T0(m, n)
        and not in_J((m, n, n), semantics)
        and _l_thresholds(m, n)
    )


def in_M(m, n, semantics: str = EMPTY) -> bool:
    return not in_T0(m, n) and in_J((m, n, n), semantics)


def in_N(m, n, semantics: str = EMPTY) -> bool:
    return (
        not in_T0(m, n)
        and not in_J((m, n, n), semantics)
        and not _l_thresholds(m, n)
    )


# ───────────────────────── vectorized predicates ─────────────────────────
#
# All take equal-length 1-D float64 arrays and return bool arrays.  Internal
# reductions are elementwise numpy ops only (no BLAS), so results do not
# depend on thread count.

_CHUNK = 16384


def _window_v(x):
    return (x >= F_17_35) & (x <= F_18_35)


def t0_v(m1, m2):
    return _window_v(m1) | _window_v(m2) | _window_v(m1 + m2)


def t1_v(m1, m2):
    return (m1 <= F_18_35) & (m2 <= F_9_35)


def t2_v(s1, s2, s3):
    head = s1 <= F_18_35
    t21 = (
        (s2 >= s3)
        & (0.75 * s2 + s3 <= F_9_35)
        & (s2 + 0.5 * s3 <= F_9_35)
        & (1.75 * s2 + 1.5 * s3 <= F_18_35)
    )
    t22 = (s2 <= F_9_35) & (s3 <= F_9_140)
    t23 = (2.0 * s2 + s3 <= F_18_35) & (s3 <= F_9_70)
    return head & (t21 | t22 | t23)


def t21_v(s1, s2, s3):
    return (
        (s1 <= F_18_35)
        & (s2 >= s3)
        & (0.75 * s2 + s3 <= F_9_35)
        & (s2 + 0.5 * s3 <= F_9_35)
        & (1.75 * s2 + 1.5 * s3 <= F_18_35)
    )


def t22_v(s1, s2, s3):
    return (s1 <= F_18_35) & (s2 <= F_9_35) & (s3 <= F_9_140)


def t23_v(s1, s2, s3):
    return (s1 <= F_18_35) & (2.0 * s2 + s3 <= F_18_35) & (s3 <= F_9_70)


def _subset_sums(cols):
    """(n, 2^d) subset-sum table via the binary DP S[j] = S[j & (j-1)] + x_b."""
    d = len(cols)
    n = cols[0].shape[0]
    S = np.empty((n, 1 << d))
    S[:, 0] = 0.0
    for j in range(1, 1 << d):
        b = (j & -j).bit_length() - 1
        np.add(S[:, j & (j - 1)], cols[b], out=S[:, j])
    return S


def i_v(cols, semantics: str = EMPTY):
    d = len(cols)
    n = cols[0].shape[0]
    out = np.zeros(n, dtype=bool)
    for start in range(0, n, _CHUNK):
        sl = slice(start, min(start + _CHUNK, n))
        S = _subset_sums([c[sl] for c in cols])
        if semantics == EMPTY:
            out[sl] = _window_v(S[:, 1:]).any(axis=1)
        else:
            total = S[:, -1]
            hit = np.zeros(S.shape[0], dtype=bool)
            for j in range(1, (1 << d) - 1):
                hit |= t0_v(S[:, j], total - S[:, j])
            out[sl] = hit
    return out


def _ternary_assignments(d: int, strict: bool):
    """0/1 group-indicator matrices for all ordered 3-colorings of d items.

    Rows sorted by how many items leave group 1 — cheap witnesses first,
    which lets j_v retire most points after a few batches.
    """
    colors = np.array(list(product((0, 1, 2), repeat=d)), dtype=np.int8)
    if strict:
        keep = (
            (colors == 0).any(axis=1)
            & (colors == 1).any(axis=1)
            & (colors == 2).any(axis=1)
        )
        colors = colors[keep]
    order = np.argsort((colors != 0).sum(axis=1), kind="stable")
    colors = colors[order]
    return (
        (colors == 0).astype(np.float64),
        (colors == 1).astype(np.float64),
        (colors == 2).astype(np.float64),
    )


_TERNARY_CACHE: dict = {}


def _ternary(d: int, strict: bool):
    key = (d, strict)
    if key not in _TERNARY_CACHE:
        _TERNARY_CACHE[key] = _ternary_assignments(d, strict)
    return _TERNARY_CACHE[key]


def _group_sums(cols, onehot):
    """(n, batch) sums Σ_i x_i·onehot[b,i]; plain multiply-adds, no BLAS."""
    n = cols[0].shape[0]
    out = np.zeros((n, onehot.shape[0]))
    for i, c in enumerate(cols):
        w = onehot[:, i]
        if w.any():
            out += c[:, None] * w[None, :]
    return out


_TERNARY_BATCH = 243


def j_v(cols, semantics: str = EMPTY):
    d = len(cols)
    n = cols[0].shape[0]
    strict = semantics != EMPTY
    out = np.zeros(n, dtype=bool)
    for start in range(0, n, _CHUNK):
        sl = slice(start, min(start + _CHUNK, n))
        sub = [c[sl] for c in cols]
        S = _subset_sums(sub)
        total = S[:, -1]
        j_lo = 1 if strict else 0
        j_hi = (1 << d) - 1 if strict else (1 << d)
        two = ((S[:, j_lo:j_hi] <= F_18_35) & ((total[:, None] - S[:, j_lo:j_hi]) <= F_9_35)).any(axis=1)
        found = two
        rest = np.flatnonzero(~found)
        if rest.size:
            a1, a2, a3 = _ternary(d, strict)
            xs = [c[rest] for c in sub]
            hit_idx = []
            for b0 in range(0, a1.shape[0], _TERNARY_BATCH):
                b1 = min(b0 + _TERNARY_BATCH, a1.shape[0])
                # s3 accumulated from components, not total − s1 − s2: exact
                # ties on T₂₁'s m₂ ≥ m₃ boundary occur for every tuple with
                # repeated components and must survive.
                s1 = _group_sums(xs, a1[b0:b1])
                s2 = _group_sums(xs, a2[b0:b1])
                s3 = _group_sums(xs, a3[b0:b1])
                hit = t2_v(s1, s2, s3).any(axis=1)
                if hit.any():
                    hit_idx.append(rest[hit])
                    keep = ~hit
                    rest = rest[keep]
                    xs = [x[keep] for x in xs]
                    if rest.size == 0:
                        break
            if hit_idx:
                found[np.concatenate(hit_idx)] = True
        out[sl] = found
    return out


def _l_thresholds_v(m, n):
    return (n >= F_53_255) | (m >= F_1129_2448) | (0.5 * m + n >= F_9361_24480)


def _masked(fn, mask, cols):
    """Evaluate fn only where mask holds; False elsewhere."""
    out = np.zeros(mask.shape[0], dtype=bool)
    idx = np.flatnonzero(mask)
    if idx.size:
        out[idx] = fn([c[idx] for c in cols])
    return out


def l_v(m, n, semantics: str = EMPTY):
    pre = ~t0_v(m, n) & _l_thresholds_v(m, n)
    return pre & ~_masked(lambda c: j_v([c[0], c[1], c[1]], semantics), pre, [m, n])


def m_v(m, n, semantics: str = EMPTY):
    pre = ~t0_v(m, n)
    return _masked(lambda c: j_v([c[0], c[1], c[1]], semantics), pre, [m, n])


def n_v(m, n, semantics: str = EMPTY):
    pre = ~t0_v(m, n) & ~_l_thresholds_v(m, n)
    return pre & ~_masked(lambda c: j_v([c[0], c[1], c[1]], semantics), pre, [m, n])


# ───────────────────────── loss-region ledgers ─────────────────────────
#
# One vectorized implementation per printed ledger, hand-transcribed as an
# independent cross-check of the declarative integral files.  Conditions are
# applied progressively so the expensive I/J atoms only see survivors.


class _Chain:
    """Progressive conjunction over an index set."""

    def __init__(self, n: int):
        self.idx = np.arange(n)

    def require(self, cond):
        if self.idx.size:
            self.idx = self.idx[cond(self.idx)]

    def result(self, n: int):
        out = np.zeros(n, dtype=bool)
        out[self.idx] = True
        return out


def _base_ranges(ch, t1, t2):
    ch.require(lambda i: (t1[i] >= F_1_35) & (t1[i] < F_17_35))
    ch.require(
        lambda i: (t2[i] >= F_1_35) & (t2[i] < np.minimum(t1[i], 0.5 * (1.0 - t1[i])))
    )


def _nested_range(ch, tk, prev, partial_sum):
    # 1/35 ≤ t_k < min(t_{k-1}, ½(1 − t_1 − … − t_{k-1}))
    ch.require(
        lambda i: (tk[i] >= F_1_35)
        & (tk[i] < np.minimum(prev[i], 0.5 * (1.0 - partial_sum[i])))
    )


def _u_m_head(ch, t, s):
    """Shared head of UM1–UM7: ranges, (t1,t2) ∈ M, (t1,t2,t3) ∉ I₃,
    t4 range, (t1..t4) ∉ I₄."""
    t1, t2, t3, t4 = t[:4]
    _base_ranges(ch, t1, t2)
    ch.require(lambda i: m_v(t1[i], t2[i], s))
    _nested_range(ch, t3, t2, t1 + t2)
    ch.require(lambda i: ~i_v([t1[i], t2[i], t3[i]], s))
    _nested_range(ch, t4, t3, t1 + t2 + t3)
    ch.require(lambda i: ~i_v([t1[i], t2[i], t3[i], t4[i]], s))


def _u_n_head(ch, t, s):
    """Shared head of UN01–UN07: like the M head but (t1,t2) ∈ N and
    (t1,t2,t3) ∈ J₃ \\ I₃."""
    t1, t2, t3, t4 = t[:4]
    _base_ranges(ch, t1, t2)
    ch.require(lambda i: n_v(t1[i], t2[i], s))
    _nested_range(ch, t3, t2, t1 + t2)
    ch.require(lambda i: ~i_v([t1[i], t2[i], t3[i]], s))
    ch.require(lambda i: j_v([t1[i], t2[i], t3[i]], s))
    _nested_range(ch, t4, t3, t1 + t2 + t3)
    ch.require(lambda i: ~i_v([t1[i], t2[i], t3[i], t4[i]], s))


def _family1_tail(ch, t, s):
    """(t1..t4,t4) ∉ J₅ and (either (t1..t4) ∉ J₄ or (1−Σ₄,t2,t3,t4) ∉ J₄)."""
    t1, t2, t3, t4 = t[:4]
    ch.require(lambda i: ~j_v([t1[i], t2[i], t3[i], t4[i], t4[i]], s))
    ch.require(
        lambda i: ~j_v([t1[i], t2[i], t3[i], t4[i]], s)
        | ~j_v([1.0 - t1[i] - t2[i] - t3[i] - t4[i], t2[i], t3[i], t4[i]], s)
    )


def _family3_tail(ch, t, s):
    """(t1..t4,t4) ∉ J₅, (t1..t4) ∈ J₄ and (1−Σ₄,t2,t3,t4) ∈ J₄,
    then t5 range, ∉ I₅, t6 < ½t1, reversed ∉ I₆."""
    t1, t2, t3, t4, t5, t6 = t[:6]
    ch.require(lambda i: ~j_v([t1[i], t2[i], t3[i], t4[i], t4[i]], s))
    ch.require(lambda i: j_v([t1[i], t2[i], t3[i], t4[i]], s))
    ch.require(
        lambda i: j_v([1.0 - t1[i] - t2[i] - t3[i] - t4[i], t2[i], t3[i], t4[i]], s)
    )
    _nested_range(ch, t5, t4, t1 + t2 + t3 + t4)
    ch.require(lambda i: ~i_v([t1[i], t2[i], t3[i], t4[i], t5[i]], s))
    ch.require(lambda i: (t6[i] >= F_1_35) & (t6[i] < 0.5 * t1[i]))
    rev = 1.0 - t1 - t2 - t3 - t4 - t5
    ch.require(lambda i: ~i_v([rev[i], t2[i], t3[i], t4[i], t5[i], t6[i]], s))


def _family2_mid(ch, t, s):
    """(t1..t4,t4) ∈ J₅, t5/t6 nested ranges, ∉ I₅, ∉ I₆."""
    t1, t2, t3, t4, t5, t6 = t[:6]
    ch.require(lambda i: j_v([t1[i], t2[i], t3[i], t4[i], t4[i]], s))
    _nested_range(ch, t5, t4, t1 + t2 + t3 + t4)
    ch.require(lambda i: ~i_v([t1[i], t2[i], t3[i], t4[i], t5[i]], s))
    _nested_range(ch, t6, t5, t1 + t2 + t3 + t4 + t5)
    ch.require(lambda i: ~i_v([t1[i], t2[i], t3[i], t4[i], t5[i], t6[i]], s))


def _u_first(head):
    def fn(t, s):
        ch = _Chain(t[0].shape[0])
        head(ch, t, s)
        _family1_tail(ch, t, s)
        return ch.result(t[0].shape[0])

    return fn


def _u_second(head):
    # t4 < t5 < ½(1−Σ₄), (t1..t5) ∈ I₅ on top of the first-family region
    def fn(t, s):
        ch = _Chain(t[0].shape[0])
        head(ch, t, s)
        _family1_tail(ch, t, s)
        t1, t2, t3, t4, t5 = t[:5]
        ch.require(
            lambda i: (t5[i] > t4[i])
            & (t5[i] < 0.5 * (1.0 - t1[i] - t2[i] - t3[i] - t4[i]))
        )
        ch.require(lambda i: i_v([t1[i], t2[i], t3[i], t4[i], t5[i]], s))
        return ch.result(t[0].shape[0])

    return fn


def _u_third(head):
    # family-2 mid conditions then (t1..t6,t6) ∉ J₇
    def fn(t, s):
        ch = _Chain(t[0].shape[0])
        head(ch, t, s)
        _family2_mid(ch, t, s)
        t1, t2, t3, t4, t5, t6 = t[:6]
        ch.require(
            lambda i: ~j_v([t1[i], t2[i], t3[i], t4[i], t5[i], t6[i], t6[i]], s)
        )
        return ch.result(t[0].shape[0])

    return fn


def _u_fourth(head):
    # family-3 conditions then (1−Σ₅,…,t6,t6) ∉ J₇ and (t1−t6,…,t5) ∉ J₇
    def fn(t, s):
        ch = _Chain(t[0].shape[0])
        head(ch, t, s)
        _family3_tail(ch, t, s)
        t1, t2, t3, t4, t5, t6 = t[:6]
        rev = 1.0 - t1 - t2 - t3 - t4 - t5
        ch.require(
            lambda i: ~j_v([rev[i], t2[i], t3[i], t4[i], t5[i], t6[i], t6[i]], s)
        )
        ch.require(
            lambda i: ~j_v([t1[i] - t6[i], t2[i], t3[i], t4[i], t5[i], t6[i], t5[i]], s)
        )
        return ch.result(t[0].shape[0])

    return fn


def _u_fifth(head):
    # family-2 mid, (t1..t6,t6) ∈ J₇, nested t7/t8 ranges, ∉ I₇, ∉ I₈
    def fn(t, s):
        ch = _Chain(t[0].shape[0])
        head(ch, t, s)
        _family2_mid(ch, t, s)
        t1, t2, t3, t4, t5, t6, t7, t8 = t
        ch.require(lambda i: j_v([t1[i], t2[i], t3[i], t4[i], t5[i], t6[i], t6[i]], s))
        _nested_range(ch, t7, t6, t1 + t2 + t3 + t4 + t5 + t6)
        ch.require(
            lambda i: ~i_v([t1[i], t2[i], t3[i], t4[i], t5[i], t6[i], t7[i]], s)
        )
        _nested_range(ch, t8, t7, t1 + t2 + t3 + t4 + t5 + t6 + t7)
        ch.require(
            lambda i: ~i_v([t1[i], t2[i], t3[i], t4[i], t5[i], t6[i], t7[i], t8[i]], s)
        )
        return ch.result(t[0].shape[0])

    return fn


def _u_sixth(head):
    # family-3, (1−Σ₅,…,t6,t6) ∈ J₇, t7 < min(t6, ½(t1−t6)), reversed ∉ I₇,
    # t8 < min(t7, ½(t1−t6−t7)), reversed ∉ I₈
    def fn(t, s):
        ch = _Chain(t[0].shape[0])
        head(ch, t, s)
        _family3_tail(ch, t, s)
        t1, t2, t3, t4, t5, t6, t7, t8 = t
        rev = 1.0 - t1 - t2 - t3 - t4 - t5
        ch.require(lambda i: j_v([rev[i], t2[i], t3[i], t4[i], t5[i], t6[i], t6[i]], s))
        ch.require(
            lambda i: (t7[i] >= F_1_35)
            & (t7[i] < np.minimum(t6[i], 0.5 * (t1[i] - t6[i])))
        )
        ch.require(
            lambda i: ~i_v([rev[i], t2[i], t3[i], t4[i], t5[i], t6[i], t7[i]], s)
        )
        ch.require(
            lambda i: (t8[i] >= F_1_35)
            & (t8[i] < np.minimum(t7[i], 0.5 * (t1[i] - t6[i] - t7[i])))
        )
        ch.require(
            lambda i: ~i_v([rev[i], t2[i], t3[i], t4[i], t5[i], t6[i], t7[i], t8[i]], s)
        )
        return ch.result(t[0].shape[0])

    return fn


def _u_seventh(head):
    # family-3, (1−Σ₅,…,t6,t6) ∉ J₇, (t1−t6,…,t5) ∈ J₇,
    # t7 < min(t5, ½(1−Σ₅)), (t1−t6,…,t7) ∉ I₇,
    # t8 < min(t7, ½(1−Σ₅−t7)), (t1−t6,…,t8) ∉ I₈
    def fn(t, s):
        ch = _Chain(t[0].shape[0])
        head(ch, t, s)
        _family3_tail(ch, t, s)
        t1, t2, t3, t4, t5, t6, t7, t8 = t
        rev = 1.0 - t1 - t2 - t3 - t4 - t5
        ch.require(
            lambda i: ~j_v([rev[i], t2[i], t3[i], t4[i], t5[i], t6[i], t6[i]], s)
        )
        dif = t1 - t6
        ch.require(
            lambda i: j_v([dif[i], t2[i], t3[i], t4[i], t5[i], t6[i], t5[i]], s)
        )
        ch.require(
            lambda i: (t7[i] >= F_1_35) & (t7[i] < np.minimum(t5[i], 0.5 * rev[i]))
        )
        ch.require(
            lambda i: ~i_v([dif[i], t2[i], t3[i], t4[i], t5[i], t6[i], t7[i]], s)
        )
        ch.require(
            lambda i: (t8[i] >= F_1_35)
            & (t8[i] < np.minimum(t7[i], 0.5 * (rev[i] - t7[i])))
        )
        ch.require(
            lambda i: ~i_v([dif[i], t2[i], t3[i], t4[i], t5[i], t6[i], t7[i], t8[i]], s)
        )
        return ch.result(t[0].shape[0])

    return fn


def _u_n8_head(ch, t, s):
    """Shared head of UN08–UN14: ranges, (t1,t2) ∈ N, (t1,t2,t3) ∉ I₃ ∪ J₃,
    t4 < ½t1, (1−Σ₃,t2,t3,t4) ∉ I₄."""
    t1, t2, t3, t4 = t[:4]
    _base_ranges(ch, t1, t2)
    ch.require(lambda i: n_v(t1[i], t2[i], s))
    _nested_range(ch, t3, t2, t1 + t2)
    ch.require(lambda i: ~i_v([t1[i], t2[i], t3[i]], s))
    ch.require(lambda i: ~j_v([t1[i], t2[i], t3[i]], s))
    ch.require(lambda i: (t4[i] >= F_1_35) & (t4[i] < 0.5 * t1[i]))
    rem = 1.0 - t1 - t2 - t3
    ch.require(lambda i: ~i_v([rem[i], t2[i], t3[i], t4[i]], s))


def _un8_branch_tail(ch, t, s):
    """(1−Σ₃,t2,t3,t4,t4) ∉ J₅, (t1−t4,t2,t3,t4,t3) ∉ J₅, and either
    (1−Σ₃,t2,t3,t4) ∉ J₄ or (1−Σ₃,t1−t4,t3,min(t2,t4)) ∉ J₄."""
    t1, t2, t3, t4 = t[:4]
    rem = 1.0 - t1 - t2 - t3
    dif = t1 - t4
    ch.require(lambda i: ~j_v([rem[i], t2[i], t3[i], t4[i], t4[i]], s))
    ch.require(lambda i: ~j_v([dif[i], t2[i], t3[i], t4[i], t3[i]], s))
    ch.require(
        lambda i: ~j_v([rem[i], t2[i], t3[i], t4[i]], s)
        | ~j_v([rem[i], dif[i], t3[i], np.minimum(t2[i], t4[i])], s)
    )


def _un08(t, s):
    ch = _Chain(t[0].shape[0])
    _u_n8_head(ch, t, s)
    _un8_branch_tail(ch, t, s)
    return ch.result(t[0].shape[0])


def _un09(t, s):
    ch = _Chain(t[0].shape[0])
    _u_n8_head(ch, t, s)
    _un8_branch_tail(ch, t, s)
    t1, t2, t3, t4, t5 = t
    rem = 1.0 - t1 - t2 - t3
    ch.require(lambda i: (t5[i] > t4[i]) & (t5[i] < 0.5 * (t1[i] - t4[i])))
    ch.require(lambda i: i_v([rem[i], t2[i], t3[i], t4[i], t5[i]], s))
    return ch.result(t[0].shape[0])


def _un10(t, s):
    ch = _Chain(t[0].shape[0])
    _u_n8_head(ch, t, s)
    _un8_branch_tail(ch, t, s)
    t1, t2, t3, t4, t5 = t
    rem = 1.0 - t1 - t2 - t3
    dif = t1 - t4
    ch.require(lambda i: (t5[i] > t3[i]) & (t5[i] < 0.5 * rem[i]))
    ch.require(lambda i: i_v([dif[i], t2[i], t3[i], t4[i], t5[i]], s))
    return ch.result(t[0].shape[0])


def _un11(t, s):
    ch = _Chain(t[0].shape[0])
    _u_n8_head(ch, t, s)
    _un8_branch_tail(ch, t, s)
    t1, t2, t3, t4, t5, t6 = t
    rem = 1.0 - t1 - t2 - t3
    dif = t1 - t4
    ch.require(lambda i: (t5[i] > t4[i]) & (t5[i] < 0.5 * dif[i]))
    ch.require(lambda i: i_v([rem[i], t2[i], t3[i], t4[i], t5[i]], s))
    ch.require(lambda i: (t6[i] > t3[i]) & (t6[i] < 0.5 * rem[i]))
    ch.require(lambda i: i_v([dif[i], t2[i], t3[i], t4[i], t6[i]], s))
    return ch.result(t[0].shape[0])


def _un12(t, s):
    ch = _Chain(t[0].shape[0])
    _u_n8_head(ch, t, s)
    t1, t2, t3, t4, t5, t6 = t
    rem = 1.0 - t1 - t2 - t3
    ch.require(lambda i: j_v([rem[i], t2[i], t3[i], t4[i], t4[i]], s))
    ch.require(
        lambda i: (t5[i] >= F_1_35)
        & (t5[i] < np.minimum(t4[i], 0.5 * (t1[i] - t4[i])))
    )
    ch.require(lambda i: ~i_v([rem[i], t2[i], t3[i], t4[i], t5[i]], s))
    ch.require(
        lambda i: (t6[i] >= F_1_35)
        & (t6[i] < np.minimum(t5[i], 0.5 * (t1[i] - t4[i] - t5[i])))
    )
    ch.require(lambda i: ~i_v([rem[i], t2[i], t3[i], t4[i], t5[i], t6[i]], s))
    return ch.result(t[0].shape[0])


def _un13(t, s):
    ch = _Chain(t[0].shape[0])
    _u_n8_head(ch, t, s)
    t1, t2, t3, t4, t5, t6 = t
    rem = 1.0 - t1 - t2 - t3
    dif = t1 - t4
    ch.require(lambda i: ~j_v([rem[i], t2[i], t3[i], t4[i], t4[i]], s))
    ch.require(lambda i: j_v([dif[i], t2[i], t3[i], t4[i], t3[i]], s))
    ch.require(
        lambda i: (t5[i] >= F_1_35) & (t5[i] < np.minimum(t3[i], 0.5 * rem[i]))
    )
    ch.require(lambda i: ~i_v([dif[i], t2[i], t3[i], t4[i], t5[i]], s))
    ch.require(
        lambda i: (t6[i] >= F_1_35)
        & (t6[i] < np.minimum(t5[i], 0.5 * (rem[i] - t5[i])))
    )
    ch.require(lambda i: ~i_v([dif[i], t2[i], t3[i], t4[i], t5[i], t6[i]], s))
    return ch.result(t[0].shape[0])


def _un14(t, s):
    ch = _Chain(t[0].shape[0])
    _u_n8_head(ch, t, s)
    t1, t2, t3, t4, t5, t6 = t
    rem = 1.0 - t1 - t2 - t3
    dif = t1 - t4
    ch.require(lambda i: ~j_v([rem[i], t2[i], t3[i], t4[i], t4[i]], s))
    ch.require(lambda i: ~j_v([dif[i], t2[i], t3[i], t4[i], t3[i]], s))
    ch.require(lambda i: j_v([rem[i], t2[i], t3[i], t4[i]], s))
    ch.require(
        lambda i: j_v([rem[i], dif[i], t3[i], np.minimum(t2[i], t4[i])], s)
    )
    ch.require(
        lambda i: (t5[i] >= F_1_35) & (t5[i] < np.minimum(t4[i], 0.5 * dif[i]))
    )
    ch.require(lambda i: ~i_v([rem[i], t2[i], t3[i], t4[i], t5[i]], s))
    ch.require(
        lambda i: (t6[i] >= F_1_35) & (t6[i] < 0.5 * np.maximum(t2[i], t4[i]))
    )
    ch.require(
        lambda i: ~i_v(
            [rem[i], (t1 - t4 - t5)[i], t3[i], t5[i], t6[i], np.minimum(t2[i], t4[i])],
            s,
        )
    )
    return ch.result(t[0].shape[0])


U_LEDGERS = {
    "UM1": (4, _u_first(_u_m_head)),
    "UM2": (5, _u_second(_u_m_head)),
    "UM3": (6, _u_third(_u_m_head)),
    "UM4": (6, _u_fourth(_u_m_head)),
    "UM5": (8, _u_fifth(_u_m_head)),
    "UM6": (8, _u_sixth(_u_m_head)),
    "UM7": (8, _u_seventh(_u_m_head)),
    "UN01": (4, _u_first(_u_n_head)),
    "UN02": (5, _u_second(_u_n_head)),
    "UN03": (6, _u_third(_u_n_head)),
    "UN04": (6, _u_fourth(_u_n_head)),
    "UN05": (8, _u_fifth(_u_n_head)),
    "UN06": (8, _u_sixth(_u_n_head)),
    "UN07": (8, _u_seventh(_u_n_head)),
    "UN08": (4, _un08),
    "UN09": (5, _un09),
    "UN10": (5, _un10),
    "UN11": (6, _un11),
    "UN12": (6, _un12),
    "UN13": (6, _un13),
    "UN14": (6, _un14),
}


def u_ledger_vec(name: str, cols, semantics: str = EMPTY):
    key = name.upper().replace("_", "")
    if key not in U_LEDGERS:
        raise RegionUsageError(f"unknown ledger {name!r}")
    dim, fn = U_LEDGERS[key]
    if len(cols) != dim:
        raise RegionUsageError(f"{key} takes {dim} components, got {len(cols)}")
    return fn([np.asarray(c, dtype=float) for c in cols], semantics)


def in_U(name: str, t, semantics: str = EMPTY) -> bool:
    """Membership in one printed loss-region ledger (UM1…UM7, UN01…UN14)."""
    cols = [np.array([float(x)]) for x in t]
    return bool(u_ledger_vec(name, cols, semantics)[0])


_ATOM_VEC = {
    "T0": (2, lambda c, s: t0_v(c[0], c[1])),
    "T1": (2, lambda c, s: t1_v(c[0], c[1])),
    "T2": (3, lambda c, s: t2_v(c[0], c[1], c[2])),
    "T21": (3, lambda c, s: t21_v(c[0], c[1], c[2])),
    "T22": (3, lambda c, s: t22_v(c[0], c[1], c[2])),
    "T23": (3, lambda c, s: t23_v(c[0], c[1], c[2])),
    "I": (None, lambda c, s: i_v(c, s)),
    "J": (None, lambda c, s: j_v(c, s)),
    "L": (2, lambda c, s: l_v(c[0], c[1], s)),
    "M": (2, lambda c, s: m_v(c[0], c[1], s)),
    "N": (2, lambda c, s: n_v(c[0], c[1], s)),
}


def eval_atom_vec(name: str, cols, semantics: str = EMPTY):
    """Vector dispatch for a region atom by name (T0…N, I, J, U ledgers)."""
    if name in _ATOM_VEC:
        arity, fn = _ATOM_VEC[name]
        if arity is not None and len(cols) != arity:
            raise RegionUsageError(f"{name} takes {arity} components, got {len(cols)}")
        if arity is None and not (1 <= len(cols) <= MAX_DIM):
            raise RegionUsageError(f"{name} takes 1..{MAX_DIM} components")
        return fn(cols, semantics)
    return u_ledger_vec(name, cols, semantics)
