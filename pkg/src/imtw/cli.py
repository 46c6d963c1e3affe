"""Command line: ``imtw solve|oracle|validate-td|normalize|mu-width|selfcheck``.

Exit codes: 0 optimal (or success), 2 infeasible, 3 width exceeded,
64 usage, 65 bad input data, 70 internal failure.
"""

import argparse
import sys

from . import __version__
from .automata import PRESETS
from .errors import ContractError, ImtwError, InvariantError, ParseError, ResourceLimitError
from .formats import emit_td, format_fraction, read_graph, read_td, read_weights
from .graph import VertexWeights
from .oracle import brute_force_optimal
from .pipeline import INFEASIBLE, MU_EXCEEDED, OPTIMAL, Instance, solve_pipeline
from .signatures import ALL, BOUNDED
from .treedec import acquire_decomposition, check_supernice, make_supernice, mu_width, validate, width

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_MU = 3
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_INTERNAL = 70

STATUS_EXIT = {OPTIMAL: EXIT_OK, INFEASIBLE: EXIT_INFEASIBLE, MU_EXCEEDED: EXIT_MU}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _instance_flags(p, solving=True):
    p.add_argument("--graph", required=True, help="graph in .gr format")
    p.add_argument("--weights", help="weight file; unlisted vertices weigh 1")
    p.add_argument("--problem", default="mwis", choices=sorted(PRESETS))
    p.add_argument("--with", dest="extra", action="append", default=[], metavar="FACTOR",
                   help="extra automaton factor, e.g. degree-cap:3 or size-mod:0:2")
    p.add_argument("--w", type=int, help="treewidth bound (must match the problem)")
    if solving:
        p.add_argument("--td", help="decomposition in .td format")
        p.add_argument("--td-source", choices=["file", "trivial", "search", "treewidth"],
                       help="where the decomposition comes from (default: file with --td, else search)")
        p.add_argument("--k", type=int, help="declared bound on the mu-width")
        p.add_argument("--family-mode", choices=[BOUNDED, ALL], default=BOUNDED)
        p.add_argument("--verify", action="store_true", help="print the feasibility report")
        p.add_argument("--stats", action="store_true", help="print timings and table sizes")


def build_parser():
    p = _Parser(prog="imtw", description="Maximum-weight induced subgraphs of bounded treewidth.")
    p.add_argument("--version", action="version", version=f"imtw {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _instance_flags(sub.add_parser("solve", help="solve an instance"))
    _instance_flags(sub.add_parser("oracle", help="solve by exhaustive search"), solving=False)

    v = sub.add_parser("validate-td", help="check a decomposition against a graph")
    v.add_argument("--graph", required=True)
    v.add_argument("--td", required=True)

    n = sub.add_parser("normalize", help="emit the supernice form of a decomposition")
    n.add_argument("--graph", required=True)
    n.add_argument("--td")
    n.add_argument("--td-source", choices=["file", "trivial", "search", "treewidth"])
    n.add_argument("--ell", type=int, required=True)

    m = sub.add_parser("mu-width", help="measure the mu-width of a decomposition")
    m.add_argument("--graph", required=True)
    m.add_argument("--td")
    m.add_argument("--td-source", choices=["file", "trivial", "search", "treewidth"])

    s = sub.add_parser("selfcheck", help="run the randomized cross-validation suites")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=20)
    s.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    return p


def _load(args):
    G = read_graph(args.graph)
    weights = read_weights(args.weights, G.n) if getattr(args, "weights", None) else VertexWeights.unit(G.n)
    return G, weights


def _decomposition(args, G):
    source = args.td_source or ("file" if args.td else "search")
    if source == "file" and not args.td:
        raise ContractError("--td-source file needs --td")
    return acquire_decomposition(G, source, args.td)


def cmd_solve(args, out):
    G, weights = _load(args)
    T = _decomposition(args, G)
    inst = Instance(G, weights, args.problem, tuple(args.extra), args.w, args.k, T,
                    family_mode=args.family_mode)
    rep = solve_pipeline(inst)
    for line in rep.lines():
        print(line, file=out)
    if rep.status == MU_EXCEEDED:
        print(f"mu-width {rep.k}", file=out)
    if args.verify and rep.verification is not None:
        verdict = "pass" if rep.verification.ok else "fail"
        print(f"verify {verdict}", file=out)
        if not rep.verification.ok:
            print(rep.verification.report.text(), file=out)
    if args.stats:
        print(f"k {rep.k} ell {rep.ell}", file=out)
        for key, val in rep.timings.items():
            print(f"time {key} {val:.4f}", file=out)
        if "dp" in rep.stats:
            print(f"dp {rep.stats['dp']}", file=out)
    if rep.verification is not None and not rep.verification.ok:
        return EXIT_INTERNAL
    return STATUS_EXIT[rep.status]


def cmd_oracle(args, out):
    G, weights = _load(args)
    inst = Instance(G, weights, args.problem, tuple(args.extra), args.w)
    best = brute_force_optimal(G, weights, inst.spec())
    if best is None:
        print(f"status {INFEASIBLE}", file=out)
        return EXIT_INFEASIBLE
    X, wt = best
    print(f"status {OPTIMAL}", file=out)
    print(f"weight {format_fraction(wt)}", file=out)
    verts = [str(v + 1) for v in range(G.n) if (X >> v) & 1]
    print("solution" + ("" if not verts else " " + " ".join(verts)), file=out)
    return EXIT_OK


def cmd_validate(args, out):
    G = read_graph(args.graph)
    T = read_td(args.td, G.n)
    rep = validate(G, T)
    if rep.ok:
        print(f"valid width {width(T)}", file=out)
        return EXIT_OK
    print("invalid", file=out)
    print(rep.text(), file=out)
    return EXIT_DATA


def cmd_normalize(args, out):
    G = read_graph(args.graph)
    T = _decomposition(args, G)
    S = make_supernice(G, T, args.ell)
    rep = check_supernice(S)
    if not rep.ok:
        raise InvariantError(rep.text())
    print(f"c supernice ell {args.ell} root {S.root + 1}", file=out)
    out.write(emit_td(S, G.n))
    return EXIT_OK


def cmd_mu_width(args, out):
    G = read_graph(args.graph)
    T = _decomposition(args, G)
    print(f"mu-width {mu_width(G, T)}", file=out)
    print(f"width {width(T)}", file=out)
    return EXIT_OK


def cmd_selfcheck(args, out):
    from .selfcheck import selfcheck
    print(f"seed {args.seed} budget {args.budget}", file=out)
    failed = False
    for res in selfcheck(args.seed, args.budget, args.suite):
        print(res.line(), file=out)
        if res.failed:
            failed = True
            print(res.witness, file=out, end="")
    return EXIT_INTERNAL if failed else EXIT_OK


COMMANDS = {
    "solve": cmd_solve, "oracle": cmd_oracle, "validate-td": cmd_validate,
    "normalize": cmd_normalize, "mu-width": cmd_mu_width, "selfcheck": cmd_selfcheck,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (ParseError, OSError) as exc:
        print(f"imtw: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ContractError, ResourceLimitError) as exc:
        print(f"imtw: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantError, ImtwError) as exc:
        print(f"imtw: internal failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
