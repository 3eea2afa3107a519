"""Command-line front end: file-based, deterministic experiment runner.

Subcommands
    analyze        subshift report: irreducibility, primitivity, class
                   period and cyclic decomposition, entropy, exact
                   periodic-point counts
    lpp            certificate or refutation that every large period has
                   an epsilon-dense periodic point
    pseudo-shadow  homoclinic pseudo-orbits of every length in a range,
                   shadowed into true periodic orbits, with per-n defect,
                   residual, shadowing distance, and density columns
    approx-measure best periodic or mixing-Markov approximation of a
                   target measure, with a CSV scan trace
    perturb-smoke  horseshoe rates perturbed by a relative magnitude;
                   certificates before and after are compared
    coding-table   horseshoe word <-> point table at a requested depth

All inputs and outputs are JSON (CSV for scan traces); every report
embeds the fully resolved configuration and the package version, and
reruns are byte-identical.  Exit codes: 0 success, 2 invalid input,
3 horizon or precondition failure, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .dense_periods import (DensePeriodsCertificate, DensePeriodsRefutation,
                            HorizonTooSmallError, dense_periods_certificate,
                            homoclinic_restricted_certificate)
from .homoclinic import (InsufficientSegmentError, build_periodic_pseudo_orbit,
                         compute_excursion_parameters, verify_pseudo_orbit)
from .measures import (BernoulliProduct, FiniteSupportMeasure, LebesgueTorus,
                       approximate_by_periodic, bernoulli_approximation,
                       cycle_measure, cylinder_family, fourier_family)
from .sft import (ConvergenceError, NonEssentialMatrixError, ReducibleMatrixError,
                  SymbolicCycle, TransitionMatrix, class_period,
                  count_periodic_points, cyclic_decomposition, is_irreducible,
                  is_primitive, topological_entropy)
from .shadowing import ShadowingError, density_check, shadow_periodic
from .systems import (Horseshoe, SftSystem, ToralAutomorphism, homoclinic_point,
                      parse_system)

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4


class PreconditionError(RuntimeError):
    """Horizon or precondition failures mapped to exit code 3."""


@dataclass
class ExperimentConfig:
    """Fully resolved parameters of one command run; embedded verbatim in
    every report so no default stays hidden."""

    command: str
    parameters: dict
    seed: int = 0
    version: str = __version__

    def as_dict(self) -> dict:
        return {"command": self.command, "parameters": self.parameters,
                "seed": self.seed, "version": self.version}


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read JSON from {path}: {exc}") from exc


def _load_matrix(path: str) -> TransitionMatrix:
    data = _load_json(path)
    rows = data.get("matrix", {}).get("rows") if "matrix" in data else data.get("rows")
    if rows is None:
        raise ValueError(f"{path}: expected a matrix object with 'rows'")
    return TransitionMatrix(rows)


def _parse_word(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.strip())
    except ValueError as exc:
        raise ValueError(f"cycle word must be digits, got {text!r}") from exc


def _parse_rational_point(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"point must be 'x,y', got {text!r}")
    return (Fraction(parts[0].strip()), Fraction(parts[1].strip()))


def _emit(report: dict, config: ExperimentConfig, out_dir: str, name: str,
          fmt: str = "json", csv_rows: list | None = None,
          csv_header: list | None = None) -> None:
    report = {"config": config.as_dict(), **report}
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    (out / f"{name}.json").write_text(text)
    if csv_rows is not None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if csv_header:
            writer.writerow(csv_header)
        writer.writerows(csv_rows)
        (out / f"{name}.csv").write_text(buf.getvalue())
    if fmt == "json":
        sys.stdout.write(text)


# -- subcommands ----------------------------------------------------------


def cmd_analyze(args) -> int:
    matrix = _load_matrix(args.matrix)
    config = ExperimentConfig("analyze", {
        "matrix": [list(r) for r in matrix.rows],
        "max_period": args.max_period,
    }, seed=args.seed)
    irreducible = is_irreducible(matrix)
    report: dict = {
        "size": matrix.size,
        "irreducible": irreducible,
        "primitive": is_primitive(matrix),
        "periodic_counts": {str(n): count_periodic_points(matrix, n)
                            for n in range(1, args.max_period + 1)},
    }
    if irreducible:
        decomp = cyclic_decomposition(matrix)
        report["class_period"] = decomp.class_period
        report["classes"] = [sorted(c) for c in decomp.classes]
        report["entropy"] = topological_entropy(matrix)
    _emit(report, config, args.out, "analyze", args.format)
    return EXIT_OK


def cmd_lpp(args) -> int:
    matrix = _load_matrix(args.matrix)
    config = ExperimentConfig("lpp", {
        "matrix": [list(r) for r in matrix.rows],
        "epsilon": args.epsilon, "n_max": args.n_max,
        "cycle": args.cycle,
    }, seed=args.seed)
    try:
        if args.cycle:
            cyc = SymbolicCycle.from_word(matrix, _parse_word(args.cycle))
            result = homoclinic_restricted_certificate(matrix, cyc, args.epsilon,
                                                       args.n_max)
        else:
            result = dense_periods_certificate(matrix, args.epsilon, args.n_max)
    except HorizonTooSmallError as exc:
        raise PreconditionError(str(exc)) from exc
    if isinstance(result, DensePeriodsCertificate):
        report = {"verdict": "certificate", **result.to_json_dict()}
    else:
        report = {"verdict": "refutation", **result.to_json_dict()}
    _emit(report, config, args.out, "lpp", args.format)
    return EXIT_OK


def cmd_pseudo_shadow(args) -> int:
    system = parse_system(_load_json(args.system))
    if isinstance(system, ToralAutomorphism):
        anchor = _parse_rational_point(args.point_or_cycle)
    else:
        anchor = _parse_word(args.point_or_cycle)
    n_to_hint = args.n_to if args.n_to else 0
    datum = homoclinic_point(system, anchor, delta=args.delta,
                             forward_length=max(160, 3 * (n_to_hint + 40)),
                             backward_length=max(80, n_to_hint // 2 + 40))
    params = compute_excursion_parameters(datum)
    n_from = args.n_from if args.n_from else params.N0
    n_to = args.n_to if args.n_to else n_from + 30
    if n_from < params.N0:
        raise PreconditionError(f"n range starts below N0 = {params.N0}")
    if n_to < n_from:
        raise PreconditionError(f"empty length range [{n_from}, {n_to}] "
                                f"(N0 = {params.N0})")
    config = ExperimentConfig("pseudo-shadow", {
        "system": system.to_config(), "anchor": str(args.point_or_cycle),
        "delta": args.delta, "n_from": n_from, "n_to": n_to, "tol": args.tol,
    }, seed=args.seed)

    reference = list(datum.segment) + list(datum.p_orbit)
    rows = []
    dumps = []
    for n in range(n_from, n_to + 1):
        po = build_periodic_pseudo_orbit(datum, params, n)
        check = verify_pseudo_orbit(po, datum.delta, reference=reference)
        orbit = shadow_periodic(system, po, tol=args.tol)
        if args.dump_orbits:
            dumps.append({"pseudo_orbit": po.to_json_dict(),
                          "orbit": orbit.to_json_dict()})
        eps_local = max(check["hausdorff_to_reference"], orbit.shadow_distance,
                        1e-12)
        dens = density_check(system, orbit.points, 3.0 * eps_local,
                             net_points=reference)
        rows.append({
            "n": n,
            "defect": po.defect,
            "exact_period": check["exact_period_ok"],
            "residual": orbit.residual,
            "shadow_distance": orbit.shadow_distance,
            "dense_at_3eps": dens.dense,
        })
    report = {
        "excursion": {"N": params.N, "l": params.l, "L": params.L,
                      "N0": params.N0, "N0_product": params.N0_product},
        "shadowing_constant": getattr(system.splitting(), "shadowing_constant", None)
        if not isinstance(system, SftSystem) else None,
        "rows": rows,
        "all_pass": all(r["defect"] <= args.delta and r["residual"] <= args.tol
                        and r["exact_period"] and r["dense_at_3eps"] for r in rows),
    }
    if args.dump_orbits:
        report["orbits"] = dumps
    _emit(report, config, args.out, "pseudo_shadow", args.format,
          csv_rows=[[r["n"], r["defect"], r["residual"], r["shadow_distance"],
                     r["dense_at_3eps"]] for r in rows],
          csv_header=["n", "defect", "residual", "shadow_distance", "dense_at_3eps"])
    return EXIT_OK


def _load_target(path: str, matrix: TransitionMatrix | None):
    data = _load_json(path)
    kind = data.get("kind")
    if kind == "lebesgue":
        return LebesgueTorus(), "lebesgue"
    if kind == "bernoulli":
        return BernoulliProduct(data["p"]), f"bernoulli({data['p']})"
    if kind == "periodic_mix":
        if matrix is None:
            raise ValueError("periodic_mix target needs an sft system")
        atoms = []
        for comp in data["components"]:
            mu = cycle_measure(matrix, _parse_word(comp["cycle"]))
            w = Fraction(comp["weight"]) if isinstance(comp["weight"], str) \
                else Fraction(comp["weight"]).limit_denominator(10**9)
            for p, wp in mu.atoms:
                atoms.append((p, w * wp))
        return FiniteSupportMeasure(atoms), "periodic_mix"
    raise ValueError(f"unknown target kind {kind!r}")


def cmd_approx_measure(args) -> int:
    system = parse_system(_load_json(args.system))
    matrix = system.matrix if isinstance(system, SftSystem) else None
    target, target_id = _load_target(args.target, matrix)
    config = ExperimentConfig("approx-measure", {
        "system": system.to_config(), "target": target_id, "epsilon": args.epsilon,
        "mode": args.mode, "depth": args.depth, "max_period": args.max_period,
        "max_denominator": args.max_denominator,
    }, seed=args.seed)

    csv_rows: list = []
    if args.mode == "periodic":
        family = (cylinder_family(matrix, args.depth) if matrix is not None
                  else fourier_family(args.depth))
        res = approximate_by_periodic(target, system, args.epsilon, family,
                                      max_period=args.max_period,
                                      max_denominator=args.max_denominator)
        report = {
            "mode": "periodic", "family": family.description,
            "best": res.measure.to_json_dict(), "method": res.description,
            "distance": res.distance, "within_epsilon": res.within_epsilon,
        }
        csv_rows.append([target_id, "periodic", res.description, res.distance])
    else:
        if matrix is None:
            raise ValueError("bernoulli mode needs an sft system")
        if not is_primitive(matrix):
            raise ValueError("bernoulli mode requires a primitive (mixing) support")
        family = cylinder_family(matrix, args.depth)
        ba = bernoulli_approximation(target, matrix, args.epsilon, family,
                                     cycle=_parse_word(args.cycle) if args.cycle else None)
        report = {
            "mode": "bernoulli", "family": family.description,
            "cycle": "".join(map(str, ba.cycle)), "m": ba.m,
            "excursion": "".join(map(str, ba.subshift.excursion_word)),
            "block_states": ba.subshift.matrix.size,
            "measure": ba.measure.to_json_dict(),
            "distance_to_target": ba.distance_to_target,
            "distance_to_periodic": ba.distance_to_periodic,
            "within_epsilon": ba.within_epsilon,
            "scan": [[m, d] for m, d in ba.scan],
        }
        csv_rows.extend([target_id, "bernoulli", f"m={m}", d] for m, d in ba.scan)
    _emit(report, config, args.out, "approx_measure", args.format,
          csv_rows=csv_rows, csv_header=["target", "method", "parameter", "distance"])
    return EXIT_OK


def cmd_perturb_smoke(args) -> int:
    system = parse_system(_load_json(args.system))
    if not isinstance(system, Horseshoe):
        raise ValueError("perturb-smoke runs on horseshoe systems")
    mag = args.magnitude
    new_c = system.mu_s * (1.0 + mag)
    new_e = system.mu_u * (1.0 - mag)
    if not (0.0 < new_c < 0.5 and new_e > 2.0):
        raise ValueError(f"magnitude {mag} exceeds the hyperbolicity margin: "
                         f"perturbed rates ({new_c:.4g}, {new_e:.4g})")
    perturbed = Horseshoe(new_c, new_e)
    config = ExperimentConfig("perturb-smoke", {
        "system": system.to_config(), "magnitude": mag, "epsilon": args.epsilon,
        "n_max": args.n_max,
    }, seed=args.seed)

    def certificate_for(h: Horseshoe):
        m_geo = 1
        while max(h.mu_s ** m_geo, h.mu_u ** (-m_geo)) > args.epsilon:
            m_geo += 1
        result = dense_periods_certificate(h.coding_matrix, 2.0 ** (-m_geo), args.n_max)
        if isinstance(result, DensePeriodsRefutation):
            raise ShadowingError("horseshoe coding shift refuted; impossible")
        return {"word_length": m_geo, "N0": result.N0, "rates": [h.mu_s, h.mu_u]}

    before = certificate_for(system)
    after = certificate_for(perturbed)
    report = {"before": before, "after": after,
              "same_N0": before["N0"] == after["N0"]}
    _emit(report, config, args.out, "perturb_smoke", args.format)
    return EXIT_OK


def cmd_coding_table(args) -> int:
    system = parse_system(_load_json(args.system))
    if not isinstance(system, Horseshoe):
        raise ValueError("coding-table runs on horseshoe systems")
    config = ExperimentConfig("coding-table", {
        "system": system.to_config(), "depth": args.depth}, seed=args.seed)
    report = {"table": system.coding_table(args.depth)}
    _emit(report, config, args.out, "coding_table", args.format)
    return EXIT_OK


# -- entry point ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symshadow", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None,
                       help="JSON file of option values (explicit flags win)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=0, help="recorded in reports")
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("analyze", help="subshift structure report")
    p.add_argument("matrix", help="matrix JSON file")
    p.add_argument("--max-period", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("lpp", help="dense-periods certificate or refutation")
    p.add_argument("matrix")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--cycle", default=None,
                   help="restrict witnesses to this cycle's component")
    common(p)
    p.set_defaults(func=cmd_lpp)

    p = sub.add_parser("pseudo-shadow", help="build and shadow pseudo-orbits")
    p.add_argument("system")
    p.add_argument("point_or_cycle",
                   help="rational point 'x,y' (toral) or cycle word (sft/horseshoe)")
    p.add_argument("--delta", type=float, default=1e-2)
    p.add_argument("--n-from", type=int, default=None)
    p.add_argument("--n-to", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--dump-orbits", action="store_true",
                   help="include full orbit serializations in the report")
    common(p)
    p.set_defaults(func=cmd_pseudo_shadow)

    p = sub.add_parser("approx-measure", help="approximate a target measure")
    p.add_argument("target")
    p.add_argument("system")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--mode", choices=["periodic", "bernoulli"], required=True)
    p.add_argument("--depth", type=int, default=3,
                   help="cylinder depth (sft) or mode bound (torus)")
    p.add_argument("--max-period", type=int, default=12)
    p.add_argument("--max-denominator", type=int, default=40)
    p.add_argument("--cycle", default=None, help="bernoulli mode: fix the base cycle")
    common(p)
    p.set_defaults(func=cmd_approx_measure)

    p = sub.add_parser("perturb-smoke", help="horseshoe rate-perturbation smoke test")
    p.add_argument("system")
    p.add_argument("--magnitude", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--n-max", type=int, default=40)
    common(p)
    p.set_defaults(func=cmd_perturb_smoke)

    p = sub.add_parser("coding-table", help="horseshoe coding map table")
    p.add_argument("system")
    p.add_argument("--depth", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_coding_table)

    return parser


def _expand_config(argv: list[str]) -> list[str]:
    """Splice option values from a --config JSON file into argv, right
    after the subcommand so later explicit flags override them."""
    if "--config" not in argv:
        return argv
    at = argv.index("--config")
    if at + 1 >= len(argv):
        return argv
    options = _load_json(argv[at + 1])
    extra: list[str] = []
    for key, value in sorted(options.items()):
        flag = "--" + str(key).replace("_", "-")
        extra.extend([flag, json.dumps(value) if isinstance(value, (dict, list))
                      else str(value)])
    insert_at = 1 if argv and not argv[0].startswith("-") else 0
    return argv[:insert_at + 1] + extra + argv[insert_at + 1:]


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        argv = _expand_config(list(argv))
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PreconditionError, InsufficientSegmentError, HorizonTooSmallError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ShadowingError, ConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, NonEssentialMatrixError, ReducibleMatrixError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
