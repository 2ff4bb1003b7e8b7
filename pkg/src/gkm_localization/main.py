import argparse
import logging
import sys
from typing import List, Optional, Sequence

from gkm_localization import constructions
from gkm_localization.calabi_yau import (
    LocalModelSpec,
    Specialization,
    bps_genus_zero,
    bps_table,
    gw_local_closed_form,
    gw_local_localization,
)
from gkm_localization.cohomology import chern_class, integrate
from gkm_localization.connection import build_connection
from gkm_localization.curve_classes import curve_class_lattice
from gkm_localization.exceptions import (
    GKMError,
    InvalidGraphError,
    NotApplicableError,
)
from gkm_localization.formatting import (
    format_bps_table,
    format_connection,
    format_curve_classes,
    format_graph_info,
    format_quantum,
    format_row,
)
from gkm_localization.graph import GKMGraph
from gkm_localization.graph_io import build_class, build_graph, load_fixture, load_graph
from gkm_localization.localization import Insertion, gromov_witten
from gkm_localization.quantum import quantum_product_truncated
from gkm_localization.realizability import realizability_check
from gkm_localization.settings import ComputeSettings
from gkm_localization.validators import FIXTURE_NAMES, parse_insertion, parse_psi

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_graph_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--pn", type=int, metavar="N", help="projective space P^N")
    source.add_argument("--grassmannian", type=int, nargs=2, metavar=("K", "N"))
    source.add_argument("--flag", type=int, metavar="N", help="full flags in C^N")
    source.add_argument(
        "--product", nargs=2, metavar=("A", "B"), help="product of two graph specs"
    )
    source.add_argument("--local", type=int, nargs=2, metavar=("A1", "A2"))
    source.add_argument("--fixture", choices=FIXTURE_NAMES)
    source.add_argument("--file", metavar="PATH", help="graph JSON file")


def _add_compute_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument(
        "--mode", choices=["connection-free", "via-connection"], default=None
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gkm", description="Equivariant Gromov-Witten invariants of GKM graphs")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_text in [
        ("validate", "check the GKM axioms"),
        ("info", "list the axial function"),
        ("betti", "combinatorial Betti numbers"),
        ("curve-classes", "edge curve classes and Chern numbers"),
        ("connection", "a compatible connection"),
    ]:
        _add_graph_source(commands.add_parser(name, help=help_text))

    chern = commands.add_parser("chern", help="equivariant Chern class")
    _add_graph_source(chern)
    chern.add_argument("--degree", type=int, default=1)

    integrate_parser = commands.add_parser("integrate", help="integrate a product of classes")
    _add_graph_source(integrate_parser)
    integrate_parser.add_argument(
        "--factor", action="append", default=[], metavar="CLASS", help="pt@V, pd@FILE, c1 or one"
    )

    gw = commands.add_parser("gw", help="genus-zero Gromov-Witten invariant")
    _add_graph_source(gw)
    _add_compute_options(gw)
    gw.add_argument("--beta", type=int, nargs="+", required=True, metavar="C")
    gw.add_argument("--n", type=int, default=0, help="number of markings")
    gw.add_argument("--ev", action="append", default=[], metavar="I:CLASS")
    gw.add_argument("--psi", action="append", default=[], metavar="I:K")

    qh = commands.add_parser("qh", help="truncated equivariant quantum product")
    _add_graph_source(qh)
    _add_compute_options(qh)
    qh.add_argument("--a", required=True, metavar="CLASS")
    qh.add_argument("--b", required=True, metavar="CLASS")
    qh.add_argument("--chern-bound", type=int, required=True)
    qh.add_argument("--exceptional-bound", type=int, default=3)

    cy = commands.add_parser("cy", help="closed form for the local model X_k")
    cy.add_argument("--k", type=int, required=True)
    cy.add_argument("--d", type=int, required=True)
    cy.add_argument(
        "--specialization",
        choices=[s.value for s in Specialization],
        default=Specialization.EQUIVARIANT_CY.value,
    )
    cy.add_argument("--y", type=int, default=None)
    cy.add_argument("--localize", action="store_true", help="also compute by localization")
    _add_compute_options(cy)

    bps = commands.add_parser("bps", help="genus-zero BPS numbers of X_k")
    which = bps.add_mutually_exclusive_group(required=True)
    which.add_argument("--k", type=int)
    which.add_argument("--kmax", type=int, help="table for k = 0..KMAX")
    bps.add_argument("--dmax", type=int, required=True)
    bps.add_argument(
        "--specialization",
        choices=[s.value for s in Specialization],
        default=Specialization.EQUIVARIANT_CY.value,
    )
    bps.add_argument("--y", type=int, default=None)
    bps.add_argument("--threads", type=int, default=None)

    realizable = commands.add_parser("realizable", help="realizability test at an isolated edge")
    _add_graph_source(realizable)
    realizable.add_argument("--edge", nargs=2, metavar=("SRC", "DST"))
    return parser


def resolve_graph(args: argparse.Namespace, validate: bool = True) -> GKMGraph:
    if args.pn is not None:
        return constructions.projective_space(args.pn)
    if args.grassmannian is not None:
        return constructions.grassmannian(*args.grassmannian)
    if args.flag is not None:
        return constructions.full_flag(args.flag)
    if args.product is not None:
        first, second = (build_graph(spec) for spec in args.product)
        return constructions.product(first, second)
    if args.local is not None:
        return constructions.local_model(*args.local)
    if args.fixture is not None:
        return load_fixture(args.fixture)
    return load_graph(args.file, validate=validate)


def _insertions(graph: GKMGraph, ev: Sequence[str], psi: Sequence[str]) -> List[Insertion]:
    insertions = []
    for text in ev:
        slot, kind, argument = parse_insertion(text)
        insertions.append(Insertion(slot, build_class(graph, (kind, argument))))
    for text in psi:
        slot, power = parse_psi(text)
        insertions.append(Insertion(slot, None, power))
    return insertions


def _run(args: argparse.Namespace, settings: ComputeSettings) -> int:
    command = args.command
    threads = settings.effective_threads(getattr(args, "threads", None))
    mode = getattr(args, "mode", None) or settings.h_factor_mode

    if command == "validate":
        graph = resolve_graph(args, validate=False)
        violations = graph.validate()
        if violations:
            for violation in violations:
                print(f"{violation.kind} at {violation.location}: {violation.message}")
            return EXIT_INVALID
        print(
            f"valid: {len(graph.vertices)} vertices, valency {graph.valency}, "
            f"{graph.k_independence()}-independent"
        )
        return EXIT_OK

    if command == "cy":
        spec = LocalModelSpec(k=args.k, specialization=args.specialization, y=args.y)
        print(gw_local_closed_form(spec, args.d))
        if args.localize:
            print(gw_local_localization(spec, args.d, mode=mode, threads=threads))
        return EXIT_OK

    if command == "bps":
        if args.kmax is not None:
            for line in format_bps_table(bps_table(range(args.kmax + 1), args.dmax, threads)):
                print(line)
        else:
            row = bps_genus_zero(
                args.k, args.dmax, Specialization(args.specialization), args.y
            )
            print(format_row(row))
        return EXIT_OK

    graph = resolve_graph(args)
    if command == "info":
        lines = format_graph_info(graph)
    elif command == "betti":
        lines = [format_row(graph.combinatorial_betti(settings.betti_search_bound))]
    elif command == "curve-classes":
        lines = format_curve_classes(curve_class_lattice(graph))
    elif command == "connection":
        connection = build_connection(graph)
        lines = format_connection(connection)
        if not connection.unique:
            logger.warning("Connection is not unique; showing the lexicographically smallest")
    elif command == "chern":
        c = chern_class(graph, args.degree)
        lines = [f"{v}: {value}" for v, value in zip(graph.vertices, c.values)]
    elif command == "integrate":
        product = build_class(graph, "one")
        for text in args.factor:
            product = product * build_class(graph, text)
        lines = [str(integrate(product))]
    elif command == "gw":
        lattice = curve_class_lattice(graph)
        value = gromov_witten(
            graph,
            lattice.from_coordinates(args.beta),
            args.n,
            _insertions(graph, args.ev, args.psi),
            lattice=lattice,
            mode=mode,
            threads=threads,
        )
        lines = [str(value)]
    elif command == "qh":
        lattice = curve_class_lattice(graph)
        element = quantum_product_truncated(
            lattice,
            build_class(graph, args.a),
            build_class(graph, args.b),
            args.chern_bound,
            args.exceptional_bound,
            mode=mode,
            threads=threads,
        )
        lines = format_quantum(element)
    elif command == "realizable":
        try:
            verdict = realizability_check(graph, tuple(args.edge) if args.edge else None)
        except NotApplicableError as e:
            print(f"not applicable: {e}")
            return EXIT_OK
        src, dst = verdict.edge
        status = f"pass ({verdict.case})" if verdict.passed else "fail"
        lines = [
            f"{status} at {src} -> {dst}: k = {verdict.parameters.k}, {verdict.reason}",
            f"GW in class [C_e]: {verdict.invariant} (polynomial: {verdict.invariant_is_polynomial})",
        ]
    else:
        raise UsageError(f"Unknown command {command}")
    for line in lines:
        print(line)
    return EXIT_OK


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command and return its exit code: 0 on success, 2 for an invalid graph,
    1 for usage and computation errors.
    """
    try:
        args = build_parser().parse_args(argv)
        settings = ComputeSettings()
        return _run(args, settings)
    except UsageError as e:
        print(f"gkm: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except InvalidGraphError as e:
        print(f"gkm: invalid graph: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (GKMError, ValueError, OSError) as e:
        print(f"gkm: {e}", file=sys.stderr)
        return EXIT_ERROR


def main():
    """
    Main entry point for the gkm script defined in pyproject.toml.
    """
    try:
        settings = ComputeSettings()
        logging.basicConfig(stream=sys.stderr, level=settings.log_level)
        code = dispatch(sys.argv[1:])
    except Exception:
        import traceback

        traceback.print_exc(file=sys.stderr)
        sys.exit(1)
    sys.exit(code)


if __name__ == "__main__":
    main()
