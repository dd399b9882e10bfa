"""Independent reference computations used by the tests.

Nothing here imports the decoders it checks; codebooks come from the
parity-check matrix by exhaustive search, marginals from explicit sums.
"""
from itertools import product

import numpy as np


def nullspace_codebook(h) -> np.ndarray:
    """Every length-n word x with H x = 0, by brute force over 2^n words."""
    h = np.asarray(h, dtype=np.int64)
    n = h.shape[1]
    words = (np.arange(2**n)[:, None] >> np.arange(n)) & 1
    ok = ~((words @ h.T) % 2).any(axis=1)
    return words[ok]


def explicit_marginals(codebook, evidence) -> np.ndarray:
    """Bit marginals as plain products summed codeword by codeword."""
    n = codebook.shape[1]
    marg = np.zeros((n, evidence.shape[1]))
    for word in codebook:
        w = np.prod(evidence[np.arange(n), word])
        marg[np.arange(n), word] += w
    return marg / marg.sum(axis=1, keepdims=True)


def eq2_by_rows(rows, out, p, q):
    """Normalized sum over satisfying rows, written out longhand."""
    others = [r for r in range(3) if r != out]
    size = 1 + max(row[out] for row in rows)
    acc = [0.0] * size
    for row in rows:
        acc[row[out]] += p[row[others[0]]] * q[row[others[1]]]
    total = sum(acc)
    return [a / total for a in acc]


def chain_elimination(t1_rows, t2_rows, ev_a, ev_b, ev_c, ev_d):
    """Marginals of a two-constraint chain A-t1-B... by summing the joint.

    t1 joins (x0, x1, s) and t2 joins (s, x2, x3); x0..x3 carry evidence,
    s is internal.  Returns the four observable marginals.
    """
    joint = {}
    for a, b, s in t1_rows:
        for s2, c, d in t2_rows:
            if s2 != s:
                continue
            w = ev_a[a] * ev_b[b] * ev_c[c] * ev_d[d]
            joint[(a, b, c, d)] = joint.get((a, b, c, d), 0.0) + w
    out = []
    for pos, ev in enumerate((ev_a, ev_b, ev_c, ev_d)):
        m = np.zeros(len(ev))
        for key, w in joint.items():
            m[key[pos]] += w
        out.append(m / m.sum())
    return out


def all_pairs_single_valued(rows) -> bool:
    for r1, r2 in product(rows, rows):
        for out in range(3):
            others = [r for r in range(3) if r != out]
            if all(r1[o] == r2[o] for o in others) and r1[out] != r2[out]:
                return False
    return True
