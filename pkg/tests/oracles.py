"""Slow reference implementations, written straight from the definitions."""
import numpy as np


def walsh_max(table) -> int:
    size = len(table)
    best = 0
    for b in range(1, size):
        for a in range(size):
            s = 0
            for x in range(size):
                s += 1 - 2 * ((bin(int(table[x]) & b).count("1") + bin(a & x).count("1")) & 1)
            best = max(best, abs(s))
    return best


def nonlinearity(table) -> int:
    return (len(table) - walsh_max(table)) // 2


def differential_uniformity(table) -> int:
    size = len(table)
    best = 0
    for a in range(1, size):
        counts = np.zeros(size, dtype=int)
        for x in range(size):
            counts[int(table[x]) ^ int(table[x ^ a])] += 1
        best = max(best, int(counts.max()))
    return best


def boomerang_uniformity(table) -> int:
    size = len(table)
    inv = [0] * size
    for x, y in enumerate(table):
        inv[int(y)] = x
    best = 0
    for a in range(1, size):
        for b in range(1, size):
            c = 0
            for x in range(size):
                if inv[int(table[x]) ^ b] ^ inv[int(table[x ^ a]) ^ b] == a:
                    c += 1
            best = max(best, c)
    return best
