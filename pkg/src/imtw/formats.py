"""Text formats: PACE ``.gr`` graphs, PACE ``.td`` decompositions, weight files.

Files are 1-indexed; everything in memory is 0-indexed. Parsers raise
ParseError carrying the offending line number. Emitters write canonical
output (sorted edges, sorted bag members, sorted weight lines) that parses
back to an equal object.
"""

from fractions import Fraction

from .bits import members, popcount
from .errors import ParseError
from .graph import Graph, VertexWeights
from .treedec import TreeDecomposition


def _lines(text):
    """(line number, tokens) for every non-blank, non-comment line."""
    for no, raw in enumerate(text.splitlines(), 1):
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        yield no, toks


def _int(tok, no, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} {tok!r} is not an integer", no) from None


def _vertex(tok, n, no):
    v = _int(tok, no, "vertex")
    if not 1 <= v <= n:
        raise ParseError(f"vertex {v} outside 1..{n}", no)
    return v - 1


# ------------------------------------------------------------------- graphs

def parse_gr(text):
    n = m = None
    edges = []
    seen = set()
    for no, toks in _lines(text):
        if toks[0] == "p":
            if n is not None:
                raise ParseError("second header line", no)
            if len(toks) != 4 or toks[1] != "tw":
                raise ParseError("header must read 'p tw <n> <m>'", no)
            n, m = _int(toks[2], no, "vertex count"), _int(toks[3], no, "edge count")
            if n < 0 or m < 0:
                raise ParseError("negative count in header", no)
            continue
        if n is None:
            raise ParseError("edge line before the header", no)
        if len(toks) != 2:
            raise ParseError("edge line must hold two vertices", no)
        u, v = _vertex(toks[0], n, no), _vertex(toks[1], n, no)
        if u == v:
            raise ParseError(f"self-loop at vertex {u + 1}", no)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"edge {u + 1} {v + 1} listed twice", no)
        seen.add(key)
        edges.append(key)
    if n is None:
        raise ParseError("missing 'p tw' header", None)
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}", None)
    return Graph(n, edges)


def emit_gr(G):
    out = [f"p tw {G.n} {G.m}"]
    out += [f"{u + 1} {v + 1}" for u, v in sorted(G.edges)]
    return "\n".join(out) + "\n"


# ----------------------------------------------------------- decompositions

def parse_td(text, n=None):
    """Parse a ``.td`` file; with ``n`` given the header's vertex count must match it."""
    header = None
    bags = {}
    edges = []
    for no, toks in _lines(text):
        if toks[0] == "s":
            if header is not None:
                raise ParseError("second solution line", no)
            if len(toks) != 5 or toks[1] != "td":
                raise ParseError("header must read 's td <N> <maxbag> <n>'", no)
            header = tuple(_int(x, no, "header field") for x in toks[2:])
            if n is not None and header[2] != n:
                raise ParseError(f"decomposition is for {header[2]} vertices, graph has {n}", no)
            continue
        if header is None:
            raise ParseError("line before the 's td' header", no)
        N, maxbag, nv = header
        if toks[0] == "b":
            if len(toks) < 2:
                raise ParseError("bag line without an id", no)
            i = _int(toks[1], no, "bag id")
            if not 1 <= i <= N:
                raise ParseError(f"bag id {i} outside 1..{N}", no)
            if i in bags:
                raise ParseError(f"bag {i} defined twice", no)
            mask = 0
            for tok in toks[2:]:
                v = _vertex(tok, nv, no)
                if (mask >> v) & 1:
                    raise ParseError(f"vertex {v + 1} repeated in bag {i}", no)
                mask |= 1 << v
            if popcount(mask) > maxbag:
                raise ParseError(f"bag {i} larger than the announced {maxbag}", no)
            bags[i] = mask
            continue
        if len(toks) != 2:
            raise ParseError("tree edge line must hold two bag ids", no)
        a, b = _int(toks[0], no, "bag id"), _int(toks[1], no, "bag id")
        for x in (a, b):
            if not 1 <= x <= N:
                raise ParseError(f"bag id {x} outside 1..{N}", no)
        if a == b:
            raise ParseError(f"tree edge joins bag {a} to itself", no)
        edges.append((a - 1, b - 1))
    if header is None:
        raise ParseError("missing 's td' header", None)
    N, maxbag, nv = header
    if len(bags) != N:
        raise ParseError(f"header announces {N} bags, found {len(bags)}", None)
    if len(edges) != max(N - 1, 0):
        raise ParseError(f"a tree on {N} bags needs {max(N - 1, 0)} edges, found {len(edges)}", None)
    T = TreeDecomposition([bags[i] for i in range(1, N + 1)], edges)
    if not T.is_tree():
        raise ParseError("tree edges do not form a tree", None)
    if N and max(popcount(b) for b in T.bags) != maxbag:
        raise ParseError(f"largest bag differs from the announced {maxbag}", None)
    return T, nv


def emit_td(T, n):
    maxbag = max((popcount(b) for b in T.bags), default=0)
    out = [f"s td {len(T.bags)} {maxbag} {n}"]
    for i, b in enumerate(T.bags, 1):
        out.append(" ".join(["b", str(i)] + [str(v + 1) for v in members(b)]))
    for a, b in sorted((min(a, b), max(a, b)) for a, b in T.edges):
        out.append(f"{a + 1} {b + 1}")
    return "\n".join(out) + "\n"


def read_td(path, n):
    with open(path) as fh:
        T, _ = parse_td(fh.read(), n)
    return T


# ------------------------------------------------------------------ weights

def _fraction(tok, no):
    num, _, den = tok.partition("/")
    a = _int(num, no, "weight numerator")
    b = _int(den, no, "weight denominator") if den else 1
    if b <= 0:
        raise ParseError("weight denominator must be positive", no)
    return Fraction(a, b)


def parse_weights(text, n):
    """Weights for vertices 1..n; unlisted vertices weigh 1."""
    weight = [Fraction(1)] * n
    seen = set()
    for no, toks in _lines(text):
        if len(toks) != 2:
            raise ParseError("weight line must read '<vertex> <num>[/<den>]'", no)
        v = _vertex(toks[0], n, no)
        if v in seen:
            raise ParseError(f"vertex {v + 1} weighted twice", no)
        seen.add(v)
        weight[v] = _fraction(toks[1], no)
    return VertexWeights(weight)


def format_fraction(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def emit_weights(weights):
    """Every vertex on its own line, so the file stands without defaults."""
    return "".join(f"{v + 1} {format_fraction(x)}\n" for v, x in enumerate(weights.weight))


def read_graph(path):
    try:
        with open(path) as fh:
            return parse_gr(fh.read())
    except ParseError as exc:
        exc.path = path
        raise


def read_weights(path, n):
    try:
        with open(path) as fh:
            return parse_weights(fh.read(), n)
    except ParseError as exc:
        exc.path = path
        raise
