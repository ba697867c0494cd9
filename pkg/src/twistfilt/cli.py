"""Batch command line front end.

Subcommands:

* ``filtration`` — dimension tables of the computed families (E_V, C_V,
  E_W, C_W), optionally with module-quotient tables;
* ``check`` — run a named check suite and exit 0 only if everything passes;
* ``gr`` — axiom suites of the associated graded structures;
* ``span`` — the ordered generating-set spanning check;
* ``export-table`` — dump a backend (or twisted module) as a structure
  constant table file.

All rational values are written exactly as "p/q".  Reports are serialized
canonically (sorted keys, fixed indentation), so identical configurations
produce byte-identical output regardless of parallelism; the --jobs flag is
accepted for interface stability and does not influence the report.

Exit codes: 0 all selected checks pass, 1 at least one check failed,
2 configuration or backend error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .backend import HeisenbergBackend, VABackend
from .errors import TwistFiltError
from .filtration import (
    algebra_depth_filtration,
    algebra_single_mode_span,
    ambient_module,
    check_small_lemmas,
    cofiniteness_report,
    full_space,
    module_depth_filtration,
    module_single_mode_span,
    verify_relations,
)
from .grstruct import (
    GrAlgebra,
    GrModule,
    ZhuPoisson,
    check_generating_spanning,
    check_generation,
    check_twisted_vpa_module_axioms,
    check_vpa_axioms,
)
from .report import ReportSection, dump_report, fraction_str, parse_fraction
from .tables import (
    TwistedTableModule,
    export_module_table,
    export_table,
    load_table_backend,
)
from .twisted import TwistedFockModule, TwistedModule


class ConfigError(Exception):
    pass


def _resolve_backend(spec: str):
    """Backend id -> (backend, module or None).

    Known ids: heisenberg-T2, heisenberg-T1, table:<path>.  A table file
    may carry a "module" section; without one, only algebra-side commands
    are available.
    """
    if spec == "heisenberg-T2":
        backend = HeisenbergBackend(period=2)
        return backend, TwistedFockModule(backend)
    if spec == "heisenberg-T1":
        backend = HeisenbergBackend(period=1)
        return backend, TwistedFockModule(backend)
    if spec.startswith("table:"):
        path = spec[len("table:") :]
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise ConfigError("cannot read table file %s: %s" % (path, exc))
        import json

        data = json.loads(text)
        backend = load_table_backend(data)
        module = None
        if "module" in data:
            module = TwistedTableModule(backend, data["module"])
        return backend, module
    raise ConfigError(
        "unknown backend %r (expected heisenberg-T2, heisenberg-T1 or table:<path>)"
        % spec
    )


def _parse_cutoff(text: str, period: int) -> Fraction:
    try:
        cutoff = parse_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError("cutoff %r is not a rational p/q" % text)
    if cutoff <= 0:
        raise ConfigError("cutoff must be positive, got %s" % text)
    if (cutoff * period).denominator != 1:
        raise ConfigError(
            "cutoff %s is not a multiple of 1/%d" % (text, period)
        )
    return cutoff


def _require_module(module) -> TwistedModule:
    if module is None:
        raise ConfigError(
            "this command needs a twisted module; the table file has no"
            ' "module" section'
        )
    return module


def _family_entry(name: str, n: int, dims: dict) -> dict:
    return {
        "name": name,
        "n": n,
        "slices": [
            {"weight": fraction_str(w), "dim": d} for w, d in sorted(dims.items())
        ],
    }


def _checks_payload(section: ReportSection) -> list:
    out = []
    for outcome in section.outcomes:
        entry = {"name": outcome.name, "status": outcome.status}
        if outcome.witness is not None:
            entry["witness"] = outcome.witness
        out.append(entry)
    return out


def _emit(args, payload: dict, section: ReportSection | None) -> int:
    text = dump_report(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    if section is not None:
        failed = section.failures()
        for outcome in section.outcomes:
            print("%-9s %s" % (outcome.status, outcome.name), file=sys.stderr)
        if failed:
            print("%d check(s) failed" % len(failed), file=sys.stderr)
            return 1
        print("all checks passed", file=sys.stderr)
    return 0


def _base_config(args, backend) -> dict:
    return {
        "backend": args.backend,
        "cutoff": args.cutoff,
        "period": backend.period,
        "seed": args.seed,
    }


def cmd_filtration(args) -> int:
    backend, module = _resolve_backend(args.backend)
    cutoff = _parse_cutoff(args.cutoff, backend.period)
    wanted = [f.strip() for f in args.families.split(",") if f.strip()]
    known = {"E_V", "C_V", "E_W", "C_W"}
    unknown = [f for f in wanted if f not in known]
    if unknown:
        raise ConfigError(
            "unknown families %s (choose from %s)"
            % (unknown, sorted(known))
        )
    families = []
    certificates = []
    v_cutoff = int(cutoff)
    if "E_V" in wanted:
        EV = algebra_depth_filtration(backend, v_cutoff)
        certificates.append(EV.certificate)
        for n in range(0, args.n_max + 1):
            families.append(_family_entry("E_V", n, EV.dims(n)))
    if "C_V" in wanted:
        for n in range(2, args.n_max + 1):
            families.append(
                _family_entry(
                    "C_V", n, algebra_single_mode_span(backend, n, v_cutoff).dims()
                )
            )
    if "E_W" in wanted or "C_W" in wanted:
        module = _require_module(module)
    if "E_W" in wanted:
        EW = module_depth_filtration(module, cutoff)
        certificates.append(EW.certificate)
        for n in range(0, args.n_max + 1):
            families.append(_family_entry("E_W", n, EW.dims(n)))
    if "C_W" in wanted:
        for n in range(2, args.n_max + 1):
            families.append(
                _family_entry(
                    "C_W", n, module_single_mode_span(module, n, cutoff).dims()
                )
            )
    if args.quotients:
        module = _require_module(module)
        quotients = cofiniteness_report(module, args.n_max, cutoff)
        for n, rows in quotients["quotients"].items():
            families.append(
                {
                    "name": "W/C_W",
                    "n": n,
                    "slices": [
                        {
                            "weight": row["weight"],
                            "dim": row["dim"],
                            "status": row["status"],
                        }
                        for row in rows
                    ],
                }
            )
    payload = {
        "config": _base_config(args, backend),
        "families": families,
        "checks": [],
        "certificates": certificates,
    }
    return _emit(args, payload, None)


def cmd_check(args) -> int:
    backend, module = _resolve_backend(args.backend)
    cutoff = _parse_cutoff(args.cutoff, backend.period)
    section = ReportSection()
    certificates = []
    if args.suite in ("relations", "all"):
        report = verify_relations(_require_module(module), args.n_max, cutoff)
        section.outcomes.extend(report.section.outcomes)
        certificates.extend(report.section.certificates)
    if args.suite in ("small", "all"):
        small = check_small_lemmas(_require_module(module), cutoff)
        section.outcomes.extend(small.outcomes)
    if args.suite in ("gr", "all"):
        gr = GrAlgebra(backend, int(cutoff))
        section.outcomes.extend(check_vpa_axioms(gr).outcomes)
        if module is not None:
            grw = GrModule(module, cutoff, algebra=gr)
            section.outcomes.extend(
                check_twisted_vpa_module_axioms(grw).outcomes
            )
        section.outcomes.extend(
            ZhuPoisson(backend, int(cutoff)).check_axioms().outcomes
        )
    if args.suite in ("span", "all"):
        section.outcomes.extend(
            check_generating_spanning(_require_module(module), cutoff).outcomes
        )
    payload = {
        "config": dict(_base_config(args, backend), suite=args.suite),
        "families": [],
        "checks": _checks_payload(section),
        "certificates": certificates,
    }
    return _emit(args, payload, section)


def cmd_gr(args) -> int:
    backend, module = _resolve_backend(args.backend)
    cutoff = _parse_cutoff(args.cutoff, backend.period)
    gr = GrAlgebra(backend, int(cutoff))
    section = ReportSection()
    section.outcomes.extend(check_vpa_axioms(gr).outcomes)
    if module is not None:
        grw = GrModule(module, cutoff, algebra=gr)
        section.outcomes.extend(check_twisted_vpa_module_axioms(grw).outcomes)
        section.outcomes.extend(check_generation(grw, args.n_max).outcomes)
    section.outcomes.extend(
        ZhuPoisson(backend, int(cutoff)).check_axioms().outcomes
    )
    payload = {
        "config": _base_config(args, backend),
        "families": [],
        "checks": _checks_payload(section),
        "certificates": [],
    }
    return _emit(args, payload, section)


def cmd_span(args) -> int:
    backend, module = _resolve_backend(args.backend)
    cutoff = _parse_cutoff(args.cutoff, backend.period)
    section = check_generating_spanning(_require_module(module), cutoff)
    payload = {
        "config": _base_config(args, backend),
        "families": [],
        "checks": _checks_payload(section),
        "certificates": [],
    }
    return _emit(args, payload, section)


def cmd_export_table(args) -> int:
    backend, module = _resolve_backend(args.backend)
    cutoff = _parse_cutoff(args.cutoff, backend.period)
    if args.kind == "algebra":
        data = export_table(backend, int(cutoff))
    else:
        data = export_module_table(_require_module(module), cutoff)
    text = dump_report(data)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistfilt",
        description="Exact filtration computations for twisted modules "
        "of graded vertex algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument(
            "--backend",
            required=True,
            help="heisenberg-T2 | heisenberg-T1 | table:<path>",
        )
        p.add_argument(
            "--cutoff",
            required=True,
            help='weight cutoff as an exact rational "p/q"',
        )
        p.add_argument("--seed", type=int, default=0, help="recorded in the report")
        p.add_argument(
            "--jobs",
            type=int,
            default=1,
            help="accepted for interface stability; output is identical "
            "for every value",
        )
        p.add_argument("--out", help="write the JSON report to this path")

    p = sub.add_parser("filtration", help="dimension tables of the families")
    common(p)
    p.add_argument(
        "--families",
        default="E_W,C_W",
        help="comma list from E_V,C_V,E_W,C_W",
    )
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument(
        "--quotients",
        action="store_true",
        help="include module quotient dimension tables",
    )
    p.set_defaults(func=cmd_filtration)

    p = sub.add_parser("check", help="run a check suite")
    common(p)
    p.add_argument(
        "--suite",
        default="all",
        choices=["relations", "small", "gr", "span", "all"],
    )
    p.add_argument("--n-max", type=int, default=4)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gr", help="axiom suites of the graded structures")
    common(p)
    p.add_argument("--n-max", type=int, default=3)
    p.set_defaults(func=cmd_gr)

    p = sub.add_parser("span", help="ordered generating-set spanning check")
    common(p)
    p.set_defaults(func=cmd_span)

    p = sub.add_parser("export-table", help="dump structure constant tables")
    common(p)
    p.add_argument("--kind", default="algebra", choices=["algebra", "module"])
    p.set_defaults(func=cmd_export_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except TwistFiltError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
