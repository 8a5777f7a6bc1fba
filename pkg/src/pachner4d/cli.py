"""Command-line front end: ``pachner4d verify-33 | verify-24 | expand-weight | invariant``."""

from __future__ import annotations

import argparse
import logging
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from .cluster import ClusterError, load_triangulation
from .field import DEFAULT_PRIME, MODES, Field, FieldError, make_field, parse_zeta_assignment
from .grassmann import Algebra, GeneratorTable, GrassmannError, degree_profile, format_element, \
    parse_element, support_generators
from .pachner import (
    LEFT_24,
    LEFT_33,
    RIGHT_24,
    RIGHT_33,
    IntegralError,
    algebra_for,
    boundary_mask,
    equal_up_to_sign,
    invariant_ti,
    verify_move_24,
    verify_move_33,
)
from .weights import Simplex4, WeightError, fixture_element, load_appendix_fixture, weight_W

log = logging.getLogger("pachner4d")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    mode: str = "prime-field"
    prime: int = DEFAULT_PRIME
    seed: int = 0
    trials: int = 1
    w_left: str = "auto"
    w_right: str = "auto"
    zeta_file: str | None = None
    triangulations: tuple[str, ...] = ()

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.trials < 1:
            raise ConfigError("--trials must be at least 1")

    def header(self) -> list[str]:
        lines = [f"command: {self.command}", f"mode: {self.mode}"]
        if self.mode == "prime-field":
            lines.append(f"prime: {self.prime}")
        lines.append(f"seed: {self.seed}")
        if self.zeta_file:
            lines.append(f"zeta file: {self.zeta_file}")
        return lines

    def fields(self, vertices) -> list[Field]:
        """One field per trial; the seed stream is shared so trials differ."""
        vertices = sorted(vertices)
        if self.mode == "symbolic":
            return [make_field("symbolic", vertices)]
        if self.zeta_file:
            values = parse_zeta_assignment(Path(self.zeta_file).read_text())
            return [make_field(self.mode, vertices, prime=self.prime, values=values)]
        rng = random.Random(self.seed)
        return [make_field(self.mode, vertices, seed=rng.getrandbits(64), prime=self.prime)
                for _ in range(self.trials)]


def _zeta_line(field: Field) -> list[str]:
    d = field.describe()
    return [f"zeta: {d['zeta']}"] if "zeta" in d else []


def _w_selector(selector: str, alg: Algebra):
    if selector.startswith("file:"):
        return parse_element(alg, Path(selector[5:]).read_text())
    return selector


def run_verify_33(cfg: RunConfig, out) -> int:
    print("\n".join(cfg.header()), file=out)
    print(f"w-left: {cfg.w_left}\nw-right: {cfg.w_right}", file=out)
    passed = 0
    fields = cfg.fields(range(1, 7))
    for i, f in enumerate(fields):
        alg = algebra_for(LEFT_33, RIGHT_33, field=f)
        report = verify_move_33(f, _w_selector(cfg.w_left, alg), _w_selector(cfg.w_right, alg))
        print(f"--- trial {i}", file=out)
        print(report.to_text(), file=out)
        passed += report.passed
    exact = "yes" if cfg.mode == "symbolic" else "no"
    print(f"--- summary\nexact: {exact}\npassed: {passed}/{len(fields)}", file=out)
    return EXIT_OK if passed == len(fields) else EXIT_FAIL


def run_verify_24(cfg: RunConfig, out, *, edge_factor: bool = True) -> int:
    print("\n".join(cfg.header()), file=out)
    print(f"w-right: {cfg.w_right}\nedge factor: {'-z56' if edge_factor else 'omitted'}", file=out)
    passed = 0
    fields = cfg.fields(range(1, 7))
    for i, f in enumerate(fields):
        alg = algebra_for(LEFT_24, RIGHT_24, field=f)
        report = verify_move_24(f, _w_selector(cfg.w_right, alg), edge_factor=edge_factor)
        print(f"--- trial {i}", file=out)
        print(report.to_text(), file=out)
        passed += report.passed
    exact = "yes" if cfg.mode == "symbolic" else "no"
    print(f"--- summary\nexact: {exact}\npassed: {passed}/{len(fields)}", file=out)
    return EXIT_OK if passed == len(fields) else EXIT_FAIL


def run_expand_weight(cfg: RunConfig, vertices, out, *, check_appendix: bool = False) -> int:
    if len(vertices) != 5 or len(set(vertices)) != 5:
        raise ConfigError(f"expand-weight needs five distinct vertices, got {list(vertices)}")
    s = Simplex4.of(vertices)
    f = cfg.fields(s.vertices)[0]
    alg = Algebra(GeneratorTable(s.tetrahedra), f)
    W = weight_W(s, alg)
    print(format_element(W), file=out)
    if not check_appendix:
        return EXIT_OK
    ok = W == fixture_element(load_appendix_fixture(), s, alg)
    print(f"# terms: {len(W)}; appendix check ({f.mode}): {'PASS' if ok else 'FAIL'}",
          file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def run_invariant(cfg: RunConfig, out, *, compare: bool = False) -> int:
    clusters = []
    for path in cfg.triangulations:
        try:
            clusters.append(load_triangulation(Path(path).read_text()))
        except ClusterError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    if compare and len(clusters) != 2:
        raise ConfigError("--compare needs exactly two triangulation files")
    print("\n".join(cfg.header()), file=out)
    vertices = sorted({v for c in clusters for v in c.vertices})
    status = EXIT_OK
    fields = cfg.fields(vertices)
    for i, f in enumerate(fields):
        print(f"--- trial {i}", file=out)
        for line in _zeta_line(f):
            print(line, file=out)
        alg = algebra_for(*clusters, field=f)
        values = []
        for path, c in zip(cfg.triangulations, clusters):
            value = invariant_ti(c, alg=alg)
            values.append(value)
            cls = c.classify()
            bmask = boundary_mask(c, alg)
            support = support_generators(value)
            print(f"triangulation: {path}", file=out)
            print(f"simplexes: {len(c.simplexes)}; inner tetrahedra: {len(cls.inner_tetrahedra)}; "
                  f"inner faces: {len(cls.inner_faces)}; inner edges: {len(cls.inner_edges)}",
                  file=out)
            deg = sorted(degree_profile(value))
            print(f"terms: {len(value)}; degree: {deg[0] if len(deg) == 1 else deg or '-'}; "
                  f"boundary support: {'yes' if all(bmask >> g & 1 for g in support) else 'no'}",
                  file=out)
            print("invariant (up to sign):", file=out)
            print(format_element(value), file=out)
        if compare:
            same = equal_up_to_sign(values[0], values[1])
            print(f"equal up to sign: {'yes' if same else 'no'}", file=out)
            if not same:
                status = EXIT_FAIL
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=MODES,
                        help="default: prime-field (symbolic for expand-weight)")
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=1)
    common.add_argument("--zeta", dest="zeta_file", metavar="FILE",
                        help="vertex coordinates, one '<vertex> <p>/<q>' per line")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="pachner4d",
        description="Verify the 3->3 and 2->4 Grassmann-Berezin identities and evaluate the "
                    "move invariant of small triangulations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-33", parents=[common], help="check the 3->3 identity")
    p.add_argument("--w-left", default="auto",
                   help="auto, a1234|b1234|a1235|b1235|a1236|b1236, or file:PATH")
    p.add_argument("--w-right", default="auto", help="auto, b1456|b2456|b3456, or file:PATH")

    p = sub.add_parser("verify-24", parents=[common], help="check the 2->4 identity")
    p.add_argument("--w-right", default="auto", help="auto, a1256b1256a3456b3456, or file:PATH")
    p.add_argument("--no-edge-factor", action="store_true",
                   help="drop the -z56 prefactor (negative control)")

    p = sub.add_parser("expand-weight", parents=[common], help="print the 72 terms of a weight")
    p.add_argument("vertices", type=int, nargs="+")
    p.add_argument("--check-appendix", action="store_true")

    p = sub.add_parser("invariant", parents=[common], help="invariant of triangulation files")
    p.add_argument("triangulations", nargs="+", metavar="FILE")
    p.add_argument("--compare", action="store_true",
                   help="exit 1 unless the two invariants agree up to sign")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        mode = args.mode or ("symbolic" if args.command == "expand-weight" else "prime-field")
        cfg = RunConfig(
            command=args.command, mode=mode, prime=args.prime, seed=args.seed,
            trials=args.trials, w_left=getattr(args, "w_left", "auto"),
            w_right=getattr(args, "w_right", "auto"), zeta_file=args.zeta_file,
            triangulations=tuple(getattr(args, "triangulations", ())))
        if args.command == "verify-33":
            return run_verify_33(cfg, out)
        if args.command == "verify-24":
            return run_verify_24(cfg, out, edge_factor=not args.no_edge_factor)
        if args.command == "expand-weight":
            return run_expand_weight(cfg, args.vertices, out, check_appendix=args.check_appendix)
        return run_invariant(cfg, out, compare=args.compare)
    except (ConfigError, FieldError, ClusterError, GrassmannError, WeightError, IntegralError,
            OSError) as exc:
        print(f"pachner4d: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
