"""Command-line entry point.

Exit codes: 0 ok, 2 input/validation error, 3 numerical non-convergence,
4 an inequality failed, 5 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import io
from .errors import (
    BudgetExceeded,
    ExactLimitExceeded,
    KernelValidationError,
    NonConvergenceError,
)
from .homomorphism import (
    MAX_BLOCKS,
    MAX_MOTIF_VERTICES,
    Motif,
    cycle_density_spectral,
    errata_gap,
    hom_density,
)
from .kernel import BUILTIN_FAMILIES, as_graphon, builtin_graphon, graphon_from_adjacency, sample_graph
from .norms import CUT_EXACT_LIMIT, DEFAULT_RESTARTS, SPECTRAL_TOL, NormConfig, full_norm_report
from .verify import FAMILIES, WEIGHT_MODES, FamilyReport, FamilySpec, verify_family, verify_kernel

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NONCONVERGENCE = 3
EXIT_FALSIFIED = 4
EXIT_BUDGET = 5

log = logging.getLogger("graphon_norms")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _norm_config(args) -> NormConfig:
    return NormConfig.with_exact_limit(
        args.exact_limit,
        restarts=args.restarts,
        seed=args.seed,
        tol=args.tol,
        threads=args.threads,
    )


def _emit(args, kind: str, payload: dict, timing: dict | None = None) -> None:
    if args.out:
        io.write_report(args.out, kind, payload, timing)
        log.info("wrote %s report to %s", kind, args.out)


def cmd_norms(args) -> int:
    k = io.load_kernel(args.kernel)
    t0 = time.perf_counter()
    r = full_norm_report(k, _norm_config(args))
    timing = {**r.timing, "total": time.perf_counter() - t0}
    print(f"cut_norm {fmt(r.cut_norm)} {r.cut_method}")
    print(f"op_inf1 {fmt(r.op_inf1)} {r.inf1_method}")
    print(f"op_22 {fmt(r.op_22)} {r.op22_method} iterations={r.op22_iterations} residual={fmt(r.op22_residual)}")
    print(f"hs {fmt(r.hs)}")
    _emit(args, "norms", io.norm_report_payload(r), timing)
    return EXIT_OK


def cmd_verify(args) -> int:
    config = _norm_config(args)
    t0 = time.perf_counter()
    if args.random is not None:
        n_max, count = args.random
        spec = FamilySpec(
            count=count,
            n_max=n_max,
            n_min=min(args.n_min, n_max) if count else args.n_min,
            seed=args.seed,
            family=args.family,
            weight_mode=args.weights,
        )
        report = verify_family(spec, config, threads=args.threads)
    elif args.kernel is not None:
        k = io.load_kernel(args.kernel)
        inst = verify_kernel(k, config)
        report = FamilyReport({"source": str(args.kernel)}, [inst])
        for rep in inst.reports:
            for e in rep.entries:
                mark = "ok" if e.passed else "FAIL"
                print(f"{rep.result} {e.name}: {fmt(e.left)} <= {fmt(e.right)} slack={fmt(e.slack)} {mark}")
            print(f"{rep.result}: {rep.status}")
    else:
        raise KernelValidationError("verify needs a kernel file or --random N COUNT")
    summary = report.summary()
    print(
        f"{summary['passed']}/{summary['count']} pass, {summary['failed']} fail, "
        f"{summary['non_conclusive']} non-conclusive"
    )
    for inst in report.failures:
        log.error("instance %d (seed %d) failed: %s", inst.index, inst.seed, inst.slacks())
    _emit(args, "verify", io.family_report_payload(report), {"total": time.perf_counter() - t0})
    return EXIT_OK if report.all_passed else EXIT_FALSIFIED


def _is_cycle(m: Motif) -> bool:
    n = m.vertex_count
    if n < 3 or len(m.edges) != n:
        return False
    nbrs = {v: [] for v in range(n)}
    for i, j in m.edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    if any(len(a) != 2 for a in nbrs.values()):
        return False
    seen, prev, cur = {0}, None, 0
    while True:
        nxt = nbrs[cur][0] if nbrs[cur][0] != prev else nbrs[cur][1]
        if nxt == 0:
            return len(seen) == n
        seen.add(nxt)
        prev, cur = cur, nxt


def cmd_hom(args) -> int:
    m = io.load_motif(args.motif)
    g = as_graphon(io.load_kernel(args.kernel))
    value = hom_density(m, g, max_vertices=args.max_vertices, max_blocks=args.max_blocks)
    print(f"t(F,W) {fmt(value)}")
    payload = {
        "digest": g.digest(),
        "motif": io.motif_to_dict(m),
        "density": value,
    }
    if args.spectral_check:
        if not _is_cycle(m):
            raise KernelValidationError("--spectral-check needs a cycle motif with at least 3 vertices")
        spectral = cycle_density_spectral(m.vertex_count, g, tol=args.tol)
        print(f"spectral {fmt(spectral)}")
        print(f"difference {fmt(value - spectral)}")
        payload["spectral"] = spectral
        payload["difference"] = value - spectral
    _emit(args, "hom", payload)
    return EXIT_OK


def cmd_errata(args) -> int:
    g = as_graphon(io.load_kernel(args.kernel))
    w = errata_gap(g)
    print(f"t_c2 {fmt(w.t_c2)}")
    print(f"hs_squared {fmt(w.hs_squared)}")
    print(f"gap {fmt(w.gap)}")
    _emit(args, "errata", io.errata_payload(w, g.digest()))
    return EXIT_OK


def _write_or_print(obj: dict, out) -> None:
    if out:
        Path(out).write_text(io.dumps(obj))
    else:
        sys.stdout.write(io.dumps(obj))


def cmd_gen(args) -> int:
    if args.adjacency:
        g = graphon_from_adjacency(io.load_adjacency(args.adjacency))
    else:
        if args.family is None:
            raise KernelValidationError("gen needs --family or --adjacency")
        g = builtin_graphon(args.family, args.params, args.resolution)
    _write_or_print(io.kernel_to_dict(g), args.out)
    return EXIT_OK


def cmd_sample(args) -> int:
    g = as_graphon(io.load_kernel(args.kernel))
    graph = sample_graph(g, args.nodes, args.seed)
    if args.as_graphon:
        obj = io.kernel_to_dict(graphon_from_adjacency(graph))
    else:
        obj = io.adjacency_to_dict(graph)
    _write_or_print(obj, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON output here")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--restarts", type=_positive_int, default=DEFAULT_RESTARTS)
    common.add_argument("--exact-limit", type=_positive_int, default=CUT_EXACT_LIMIT,
                        help="largest block count for exact enumeration")
    common.add_argument("--tol", type=_positive_float, default=SPECTRAL_TOL)
    common.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="graphon-norms",
        description="Cut norm, operator norms and homomorphism densities of step graphons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norms", parents=[common], help="compute the four norms of a kernel")
    p.add_argument("kernel")
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("verify", parents=[common], help="check the norm inequalities")
    p.add_argument("kernel", nargs="?")
    p.add_argument("--random", nargs=2, type=int, metavar=("N", "COUNT"),
                   help="COUNT random instances with 1..N blocks")
    p.add_argument("--n-min", type=_positive_int, default=1)
    p.add_argument("--family", choices=FAMILIES, default="graphon")
    p.add_argument("--weights", choices=WEIGHT_MODES, default="mixed")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hom", parents=[common], help="homomorphism density t(F, W)")
    p.add_argument("motif")
    p.add_argument("kernel")
    p.add_argument("--spectral-check", action="store_true",
                   help="for cycle motifs, also compute the trace formula")
    p.add_argument("--max-vertices", type=_positive_int, default=MAX_MOTIF_VERTICES)
    p.add_argument("--max-blocks", type=_positive_int, default=MAX_BLOCKS)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("errata", parents=[common], help="edge density vs squared Hilbert-Schmidt norm")
    p.add_argument("kernel")
    p.set_defaults(func=cmd_errata)

    p = sub.add_parser("gen", parents=[common], help="write a built-in step graphon")
    p.add_argument("--family", choices=BUILTIN_FAMILIES)
    p.add_argument("--params", nargs="*", type=float, default=[])
    p.add_argument("--resolution", type=_positive_int, default=1)
    p.add_argument("--adjacency", help="induced step graphon of this adjacency file instead")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sample", parents=[common], help="sample a W-random graph")
    p.add_argument("kernel")
    p.add_argument("--nodes", type=_positive_int, required=True)
    p.add_argument("--as-graphon", action="store_true",
                   help="write the induced step graphon instead of the edge list")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except KernelValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (BudgetExceeded, ExactLimitExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
