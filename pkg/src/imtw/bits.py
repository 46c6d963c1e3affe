"""Vertex sets as Python int bitmasks.

Bit i set means vertex i is a member. Every module passes sets around in this
form; conversion to lists happens only at the edges (formats, reports).
"""


def popcount(mask):
    return mask.bit_count()


def members(mask):
    """Ascending list of the vertices in ``mask``."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def iter_members(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices):
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def lowest(mask):
    """Smallest member, or -1 for the empty set."""
    return (mask & -mask).bit_length() - 1


def subsets(mask):
    """All subsets of ``mask`` (including empty and full), in increasing order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def subsets_upto(mask, limit):
    """Subsets of ``mask`` with at most ``limit`` members, ordered by size then value."""
    elems = members(mask)
    out = [0]
    layer = [(0, -1)]
    for _ in range(min(limit, len(elems))):
        nxt = []
        for sub, last in layer:
            for i in range(last + 1, len(elems)):
                nxt.append((sub | (1 << elems[i]), i))
        out.extend(sorted(s for s, _ in nxt))
        layer = nxt
    return out


def fmt(mask, one_indexed=False):
    shift = 1 if one_indexed else 0
    return "{" + ",".join(str(v + shift) for v in members(mask)) + "}"
