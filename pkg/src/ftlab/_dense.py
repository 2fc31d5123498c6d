# Dense integer power series truncated to a fixed length.
#
# A list ``c`` of length ``n`` stands for c[0] + c[1] q + ... + c[n-1] q^(n-1)
# + O(q^n).  These helpers carry the inner loops of the nested q-sums; the
# public surface always wraps results into QExpansion.


def zeros(n):
    return [0] * n


def one(n):
    c = [0] * n
    if n:
        c[0] = 1
    return c


def mul(a, b, n):
    """Truncated product of two dense series, keeping exponents < n."""
    out = [0] * n
    nz_b = [(j, y) for j, y in enumerate(b[:n]) if y]
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        lim = n - i
        for j, y in nz_b:
            if j >= lim:
                break
            out[i + j] += x * y
    return out


def shift(a, s, n):
    """Multiply by q^s (s >= 0) and truncate to length n."""
    out = [0] * n
    for i in range(max(0, n - s)):
        if i < len(a):
            out[i + s] = a[i]
    return out


def mul_one_minus(a, k, n):
    """Multiply by (1 - q^k), k >= 1."""
    out = list(a[:n]) + [0] * max(0, n - len(a))
    for i in range(n - 1, k - 1, -1):
        out[i] -= out[i - k]
    return out


def mul_geometric(a, k, n):
    """Multiply by 1/(1 - q^k) = 1 + q^k + q^2k + ..., k >= 1."""
    out = list(a[:n]) + [0] * max(0, n - len(a))
    for i in range(k, n):
        out[i] += out[i - k]
    return out


def add_into(acc, a, scale=1):
    for i, x in enumerate(a[:len(acc)]):
        if x:
            acc[i] += scale * x
    return acc


def pochhammer(offset, count, n):
    """(q^offset; q)_count truncated to length n."""
    c = one(n)
    for k in range(count):
        e = offset + k
        if e >= n:
            break
        if e == 0:
            return zeros(n)
        c = mul_one_minus(c, e, n)
    return c


def inverse_pochhammer(offset, count, n):
    """1/(q^offset; q)_count as a product of geometric series, offset >= 1."""
    c = one(n)
    for k in range(count):
        e = offset + k
        if e >= n:
            break
        c = mul_geometric(c, e, n)
    return c


def qbinomial_table(nmax, n):
    """Rows [[r choose s]_q for s in 0..r] for r in 0..nmax, truncated to length n.

    Built by the q-Pascal rule [r, s] = [r-1, s-1] + q^s [r-1, s].
    """
    rows = [[one(n)]]
    for r in range(1, nmax + 1):
        prev = rows[-1]
        row = [one(n)]
        for s in range(1, r):
            row.append(add_into(list(prev[s - 1]), shift(prev[s], s, n)))
        row.append(one(n))
        rows.append(row)
    return rows


def qbinomial(top, k, n):
    """[top choose k]_q truncated to length n, as prod (1-q^(top-k+i))/(1-q^i)."""
    if k < 0 or k > top:
        return zeros(n)
    k = min(k, top - k)
    c = one(n)
    for i in range(1, k + 1):
        c = mul_one_minus(c, top - k + i, n)
        c = mul_geometric(c, i, n)
    return c


def nested_chain_sums(depth, weight, nmax, n):
    """G[s] for s = 0..nmax, where G is the depth-fold nested sum

        G_1(s) = 1,  G_{j+1}(s) = sum_{r <= s} q^weight(r) [s choose r]_q G_j(r),

    truncated to length n.  ``weight`` maps r to a non-negative integer.
    """
    rmax = 0
    while rmax + 1 <= nmax and weight(rmax + 1) < n:
        rmax += 1
    # binom[s][r] = [s choose r]_q for r <= rmax, via q-Pascal in s
    binom = [[one(n)]]
    for s in range(1, nmax + 1):
        prev = binom[-1]
        row = [one(n)]
        for r in range(1, min(s, rmax) + 1):
            left = prev[r - 1]
            right = shift(prev[r], r, n) if r < len(prev) else zeros(n)
            row.append(add_into(list(left), right))
        binom.append(row)
    level = [one(n) for _ in range(nmax + 1)]
    for _ in range(depth - 1):
        weighted = [shift(level[r], weight(r), n) for r in range(rmax + 1)]
        nxt = []
        for s in range(nmax + 1):
            acc = zeros(n)
            for r in range(min(s, rmax) + 1):
                add_into(acc, mul(binom[s][r], weighted[r], n))
            nxt.append(acc)
        level = nxt
    return level
