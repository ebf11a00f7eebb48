"""Slow, direct reference computations used as test oracles.

Everything here is written with plain Python loops and textbook formulas,
deliberately sharing no code with the package.
"""
import cmath
import math


def dft_magnitudes(x):
    n = len(x)
    out = []
    for k in range(n):
        s = 0j
        for j, v in enumerate(x):
            s += v * cmath.exp(-2j * math.pi * k * j / n)
        out.append(abs(s))
    return out


def petrosian(x):
    n = len(x)
    changes = 0
    for i in range(1, n - 1):
        if (x[i + 1] - x[i]) * (x[i] - x[i - 1]) < 0:
            changes += 1
    return math.log10(n) / (math.log10(n) + math.log10(n / (n + 0.4 * changes)))


def higuchi(x, k_max):
    """1-based transcription: increments i = 2..floor((N-m)/k), Higuchi's 1/k scaling."""
    n = len(x)

    def xx(i):
        return x[i - 1]

    log_l, log_inv_k = [], []
    for k in range(1, k_max + 1):
        lm = []
        for m in range(1, k + 1):
            big_m = (n - m) // k
            s = 0.0
            for i in range(2, big_m + 1):
                s += abs(xx(m + i * k) - xx(m + (i - 1) * k))
            lm.append(s * (n - 1) / (big_m * k) / k)
        log_l.append(math.log(sum(lm) / k))
        log_inv_k.append(math.log(1.0 / k))
    # least-squares slope by the normal equations
    mx = sum(log_inv_k) / k_max
    my = sum(log_l) / k_max
    num = sum((a - mx) * (b - my) for a, b in zip(log_inv_k, log_l))
    den = sum((a - mx) ** 2 for a in log_inv_k)
    return num / den


def hjorth(x):
    n = len(x)
    d = [x[i] - x[i - 1] for i in range(1, n)]
    dd = [d[i] - d[i - 1] for i in range(1, len(d))]
    tp = sum(v * v for v in x) / n
    m2 = sum(v * v for v in d) / n
    m4 = sum(v * v for v in dd) / n
    return math.sqrt(m2 / tp), math.sqrt(m4 * tp / (m2 * m2))


def amplitude_stats(x):
    n = len(x)
    mean = sum(x) / n
    std = math.sqrt(sum((v - mean) ** 2 for v in x) / n)
    ax = [abs(v) for v in x]
    amean = sum(ax) / n
    astd = math.sqrt(sum((v - amean) ** 2 for v in ax) / n)
    return mean, std, amean, astd


def nearest_neighbor_label(train_rows, train_labels, p):
    best, label = None, None
    for row, lab in zip(train_rows, train_labels):
        d = sum((a - b) ** 2 for a, b in zip(row, p))
        if best is None or d < best:
            best, label = d, lab
    return label


def pnn_decision(train_rows, train_labels, n_classes, spread, p):
    """Per-class Gaussian kernel sums with log-sum-exp, argmax with lowest-index ties."""
    b = math.sqrt(math.log(2.0)) / spread
    exps = {k: [] for k in range(n_classes)}
    for row, lab in zip(train_rows, train_labels):
        d = math.sqrt(sum((a - c) ** 2 for a, c in zip(row, p)))
        exps[lab].append(-((d * b) ** 2))
    top = max(e for v in exps.values() for e in v)
    scores = [math.fsum(math.exp(e - top) for e in exps[k]) for k in range(n_classes)]
    best = max(scores)
    return scores.index(best)
