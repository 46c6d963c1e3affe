"""Pure-Python implementations of the bitset kernels.

These are the reference versions; ``_ckernels.pyx`` mirrors them line for line
with C integer types. ``kernels.py`` picks one at import time.

Conventions: ``adj[v]`` is the neighbor mask of vertex ``v``; vertex subsets are
int masks; ``vertices`` restricts the graph to an induced subgraph.
"""

BACKEND = "python"


def maximal_independent_sets(adj, vertices, cap):
    """Bron-Kerbosch with pivoting on the complement graph.

    Returns the maximal independent sets of the subgraph induced by ``vertices``
    as masks, or None when more than ``cap`` sets exist.
    """
    out = []
    if vertices == 0:
        return [0]
    # complement neighborhoods restricted to the vertex set
    cn = {}
    m = vertices
    while m:
        low = m & -m
        v = low.bit_length() - 1
        cn[v] = vertices & ~adj[v] & ~low
        m ^= low

    stack = [(0, vertices, 0)]
    while stack:
        r, p, x = stack.pop()
        if p == 0:
            if x == 0:
                out.append(r)
                if len(out) > cap:
                    return None
            continue
        # pivot: vertex of p|x with most complement neighbors inside p
        best_u, best_c = -1, -1
        m = p | x
        while m:
            low = m & -m
            u = low.bit_length() - 1
            c = (p & cn[u]).bit_count()
            if c > best_c:
                best_u, best_c = u, c
            m ^= low
        cand = p & ~cn[best_u]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            stack.append((r | low, p & cn[v], x & cn[v]))
            p &= ~low
            x |= low
            cand ^= low
    return out


def max_induced_subset(adj, edges):
    """Largest subset of ``edges`` forming an induced matching.

    Returns the chosen edge indices in ascending order. Two edges conflict when
    they share an endpoint or an edge of the graph joins their endpoints.
    """
    m = len(edges)
    if m == 0:
        return []
    closed = []
    for u, v in edges:
        closed.append(adj[u] | adj[v] | (1 << u) | (1 << v))
    conflict = [0] * m
    for i in range(m):
        ci = closed[i]
        c = 0
        for j in range(m):
            if j != i:
                a, b = edges[j]
                if (ci >> a) & 1 or (ci >> b) & 1:
                    c |= 1 << j
        conflict[i] = c

    best = [0, 0]  # size, chosen mask

    def search(avail, chosen, size):
        if size + avail.bit_count() <= best[0]:
            return
        if avail == 0:
            best[0] = size
            best[1] = chosen
            return
        low = avail & -avail
        i = low.bit_length() - 1
        rest = avail ^ low
        search(rest & ~conflict[i], chosen | low, size + 1)
        if conflict[i] & rest:
            search(rest, chosen, size)

    search((1 << m) - 1, 0, 0)
    chosen = best[1]
    return [i for i in range(m) if (chosen >> i) & 1]


def elimination_dp(ladj, costs):
    """Minimum over elimination orderings of the maximum bag cost.

    ``ladj`` is a compact adjacency (vertices 0..m-1). The bag of ``v`` when the
    set ``S`` was eliminated before it is ``{v} | Q(S, v)``, where ``Q`` holds the
    uneliminated vertices reachable from ``v`` through ``S``. The cost of a bag is
    ``costs[bag]`` or, when ``costs`` is None, ``|bag| - 1`` (giving treewidth).

    Returns ``(value, order)``; the value is -1 for the empty graph.
    """
    m = len(ladj)
    full = (1 << m) - 1
    size = 1 << m
    value = [0] * size
    choice = [0] * size
    value[0] = -1
    for s in range(1, size):
        bestv = None
        bestc = 0
        t = s
        while t:
            low = t & -t
            v = low.bit_length() - 1
            t ^= low
            rest = s ^ low
            prev = value[rest]
            if bestv is not None and prev >= bestv:
                continue
            # component of v inside rest | {v}
            comp = low
            frontier = low
            while frontier:
                f = frontier & -frontier
                frontier ^= f
                nb = ladj[f.bit_length() - 1] & rest & ~comp
                comp |= nb
                frontier |= nb
            q = 0
            c = comp
            while c:
                f = c & -c
                c ^= f
                q |= ladj[f.bit_length() - 1]
            q &= ~rest & ~low
            bag = q | low
            cost = bag.bit_count() - 1 if costs is None else costs[bag]
            cur = prev if prev > cost else cost
            if bestv is None or cur < bestv:
                bestv = cur
                bestc = v
        value[s] = bestv
        choice[s] = bestc
    order = []
    s = full
    while s:
        v = choice[s]
        order.append(v)
        s &= ~(1 << v)
    order.reverse()
    return value[full], order
