"""Batch front-end: JSON scenes in, deterministic JSON/CSV reports out.

Subcommands: ``check`` (property suites), ``cohomology`` (dimension grids),
``sequence`` (relative / Mayer-Vietoris long exact sequences), ``solve``
(certified primitives).  Exit codes: 0 success, 1 a property violation or
failed finding, 2 input error, 3 precondition failure.

Scenes are JSON files; identical scene plus seed gives byte-identical
reports (all randomness flows through random.Random(seed)).
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import Series, SeriesError
from .forms import FoliatedForm, FoliationModel, FormError
from .operators import FoliatedMorphism, MorphismError
from .checks import SUITES, run_suite
from .cohomology import (
    NotClosedError,
    VARIANTS,
    cohomology_grid,
    solve_primitive,
    solve_primitive_tilde,
)
from .sequences import (
    CoverValidationError,
    corollary_boundary_report,
    degenerate_cover,
    delta_equals_pullback_check,
    laurent_cover,
    make_mv_ses,
    make_relative_complex,
    relative_les,
    snake_les,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3

_TWIST_PARSE_BUDGET = 64  # generous cap for parsing twist polynomials


class SceneError(ValueError):
    pass


class Scene:
    """Parsed scene file: the model plus optional fixtures and knobs."""

    def __init__(self, data: dict):
        if "model" not in data:
            raise SceneError("scene is missing the 'model' key")
        md = data["model"]
        try:
            m, n, budget = int(md["m"]), int(md["n"]), int(md["budget"])
        except KeyError as exc:
            raise SceneError(f"model is missing {exc}") from None
        f = self._twist(md.get("f", "1"), m, n)
        if data.get("basic_twist_only") and any(
            sum(alpha) + sum(beta) for (alpha, beta, _) in f.terms
        ):
            raise SceneError(
                "scene requires a basic twist (x-variables only) but f has leafwise terms"
            )
        self.model = FoliationModel(m, n, budget, f)
        self.data = data
        self.seed = data.get("seed")
        self.trials = data.get("trials")
        self.slack = int(data.get("slack", 0))
        self.k = data.get("k")
        self.expect_failure = bool(data.get("expect_failure", False))
        self.h = None
        if "h" in data:
            self.h = self._twist(data["h"], m, n)
        self.g = None
        if "g" in data:
            self.g = self._twist(data["g"], m, n)

    @staticmethod
    def _twist(text: str, m: int, n: int) -> Series:
        s = Series.parse(text, m, n, _TWIST_PARSE_BUDGET)
        return s.with_budget(s.degree)

    def grid_axis(self, name: str, default):
        grid = self.data.get("grid", {})
        axis = grid.get(name, default)
        if isinstance(axis, int):
            return [axis]
        if isinstance(axis, list) and len(axis) == 2:
            return list(range(axis[0], axis[1] + 1))
        if isinstance(axis, list):
            return [int(v) for v in axis]
        raise SceneError(f"grid axis {name!r} must be an int or [lo, hi]")

    def morphism(self) -> FoliatedMorphism:
        if "morphism" not in self.data:
            raise SceneError("scene needs a 'morphism' for this command")
        entry = self.data["morphism"]
        zc_texts = entry.get("z_components", [])
        xc_texts = entry.get("x_components", [])
        m2, n2 = len(zc_texts), len(xc_texts)
        if m2 < 1:
            raise SceneError("morphism needs at least one z-component")
        f_prime = self._twist(self.data.get("f_prime", "1"), m2, n2)
        target = FoliationModel(m2, n2, self.model.budget, f_prime)
        zc = [self._parse_source_series(t) for t in zc_texts]
        xc = [self._parse_source_series(t) for t in xc_texts]
        return FoliatedMorphism(self.model, target, zc, xc)

    def _parse_source_series(self, text: str) -> Series:
        s = Series.parse(text, self.model.m, self.model.n, _TWIST_PARSE_BUDGET)
        return s.with_budget(s.degree)

    def f_prime(self, target_m: int, target_n: int) -> Series:
        return self._twist(self.data.get("f_prime", "1"), target_m, target_n)

    def pair(self, mu: FoliatedMorphism):
        if "pair" not in self.data:
            return None
        alpha = self._parse_source_series(self.data["pair"]["alpha"])
        from .operators import MorphismPair

        return MorphismPair(mu, alpha)

    def cover(self):
        if "cover" not in self.data:
            raise SceneError("scene needs a 'cover' for the mv command")
        entry = self.data["cover"]
        kind = entry.get("kind")
        D = int(entry.get("D", self.model.budget))
        if kind == "laurent":
            return kind, laurent_cover(D)
        if kind == "degenerate":
            return kind, degenerate_cover(D)
        raise SceneError(f"unknown cover kind {kind!r}")

    def target(self):
        if "target" not in self.data:
            raise SceneError("scene needs a 'target' for the solve command")
        return self.data["target"]


def load_scene(path: str) -> Scene:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return Scene(data)


def emit(report, out_path: str | None, fmt: str = "json"):
    if fmt == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = report  # pre-rendered CSV
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need_seed(scene: Scene, args) -> int:
    seed = args.seed if args.seed is not None else scene.seed
    if seed is None:
        raise SceneError("randomized runs need a seed (scene 'seed' or --seed)")
    return int(seed)


def cmd_check(args) -> int:
    scene = load_scene(args.scene)
    if args.suite not in SUITES:
        raise SceneError(f"unknown suite {args.suite!r} (choose from {SUITES})")
    seed = _need_seed(scene, args)
    trials = args.trials if args.trials is not None else (scene.trials or 100)
    morphism = None
    f_prime = None
    pair = None
    if args.suite == "intertwine" and "morphism" in scene.data:
        morphism = scene.morphism()
        f_prime = morphism.target.f
        pair = scene.pair(morphism)
    report = run_suite(
        args.suite,
        scene.model,
        seed,
        int(trials),
        h=scene.h,
        g=scene.g,
        morphism=morphism,
        f_prime=f_prime,
        pair=pair,
    )
    emit(report, args.out)
    return EXIT_OK if report["violations_total"] == 0 else EXIT_VIOLATION


def _csv_table(rows, columns) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(str(row.get(c, "")) for c in columns))
    return "\n".join(lines) + "\n"


def cmd_cohomology(args) -> int:
    scene = load_scene(args.scene)
    model = scene.model
    ps = scene.grid_axis("p", [0, model.m])
    qs = scene.grid_axis("q", [0, model.m])
    ds = scene.grid_axis("D", model.budget)
    for axis, name in ((ps, "p"), (qs, "q")):
        for v in axis:
            if not 0 <= v <= model.m:
                raise SceneError(f"grid axis {name} value {v} outside [0, {model.m}]")
    k = args.k if args.k is not None else scene.k
    rows = cohomology_grid(
        model, args.variant, ps, qs, ds, slack=scene.slack, k=None if k is None else int(k)
    )
    if args.format == "csv":
        cols = (
            ["p", "q", "D", "domain", "codomain", "rank"]
            if args.variant == "canonical"
            else ["p", "q", "D", "ker", "im", "dim"]
        )
        emit(_csv_table(rows, cols), args.out, fmt="csv")
    else:
        emit({"variant": args.variant, "rows": rows}, args.out)
    return EXIT_OK


def cmd_sequence(args) -> int:
    scene = load_scene(args.scene)
    if args.kind == "mv":
        kind, cover = scene.cover()
        try:
            ses = make_mv_ses(cover)
        except CoverValidationError as exc:
            report = {
                "kind": "mv",
                "cover": kind,
                "ses_valid": False,
                "findings": exc.findings,
                "expect_failure": scene.expect_failure,
            }
            emit(report, args.out)
            return EXIT_OK if scene.expect_failure else EXIT_VIOLATION
        les = snake_les(ses, labels=("M", "U+V", "UV"), map_labels=("A*", "B*", "delta"))
        report = {
            "kind": "mv",
            "cover": kind,
            "ses_valid": True,
            "les": les,
            "expect_failure": scene.expect_failure,
        }
        emit(report, args.out)
        ok = les["exact_everywhere"] and not scene.expect_failure
        return EXIT_OK if ok else EXIT_VIOLATION

    mu = scene.morphism()
    f_prime = mu.target.f
    p = scene.grid_axis("p", 0)[0]
    D = scene.grid_axis("D", scene.model.budget)[0]
    rc = make_relative_complex(mu, f_prime, p, D)
    if args.kind == "relative":
        les = relative_les(rc)
        emit({"kind": "relative", "p": p, "D": D, "les": les}, args.out)
        return EXIT_OK if les["exact_everywhere"] else EXIT_VIOLATION
    if args.kind == "delta":
        report = delta_equals_pullback_check(rc)
        emit({"kind": "delta", "p": p, "D": D, "report": report}, args.out)
        return EXIT_OK if report["all_equal"] else EXIT_VIOLATION
    if args.kind == "boundary":
        report = corollary_boundary_report(rc)
        emit({"kind": "boundary", "p": p, "D": D, "report": report}, args.out)
        return EXIT_OK if report["all_pass"] else EXIT_VIOLATION
    raise SceneError(f"unknown sequence kind {args.kind!r}")


def cmd_solve(args) -> int:
    scene = load_scene(args.scene)
    entry = scene.target()
    slack = args.slack if args.slack is not None else scene.slack
    op = entry.get("op", "dbar_f")
    try:
        if op == "tilde":
            mu = scene.morphism()
            f_prime = mu.target.f
            phi = FoliatedForm.from_dict(mu.target, entry["phi"])
            psi = FoliatedForm.from_dict(mu.source, entry["psi"])
            result = solve_primitive_tilde(mu, f_prime, phi, psi, slack=slack)
            if result is None:
                emit({"op": op, "found": False, "slack": slack}, args.out)
                return EXIT_VIOLATION
            phi1, psi1 = result
            emit(
                {
                    "op": op,
                    "found": True,
                    "certified": True,
                    "slack": slack,
                    "phi1": phi1.to_dict(),
                    "psi1": psi1.to_dict(),
                },
                args.out,
            )
            return EXIT_OK
        target = FoliatedForm.from_dict(scene.model, entry["form"])
        k = entry.get("k", scene.k)
        primitive = solve_primitive(
            op, scene.model, target, slack=slack, k=None if k is None else int(k)
        )
        if primitive is None:
            emit({"op": op, "found": False, "slack": slack}, args.out)
            return EXIT_VIOLATION
        emit(
            {
                "op": op,
                "found": True,
                "certified": True,
                "slack": slack,
                "primitive": primitive.to_dict(),
            },
            args.out,
        )
        return EXIT_OK
    except NotClosedError as exc:
        residual = exc.residual
        if isinstance(residual, tuple):
            detail = [str(r) for r in residual]
        else:
            detail = str(residual)
        emit({"op": op, "error": "target not closed", "residual": detail}, args.out)
        return EXIT_PRECONDITION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leafcoh",
        description="Exact twisted leafwise cohomology on polynomial foliation scenes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scene", required=True, help="path to the JSON scene")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=None, help="override the scene seed")
        p.add_argument("--trials", type=int, default=None, help="override scene trials")

    p_check = sub.add_parser("check", help="run a property suite")
    common(p_check)
    p_check.add_argument("--suite", required=True, choices=SUITES)
    p_check.set_defaults(func=cmd_check)

    p_coh = sub.add_parser("cohomology", help="dimension tables over a (p,q,D) grid")
    common(p_coh)
    p_coh.add_argument("--variant", choices=VARIANTS, default="dolbeault")
    p_coh.add_argument("--k", type=int, default=None, help="weight shift for variant 'k'")
    p_coh.set_defaults(func=cmd_cohomology)

    p_seq = sub.add_parser("sequence", help="long exact sequence reports")
    common(p_seq)
    p_seq.add_argument("--kind", required=True, choices=("mv", "relative", "boundary", "delta"))
    p_seq.set_defaults(func=cmd_sequence)

    p_solve = sub.add_parser("solve", help="search for a certified primitive")
    common(p_solve)
    p_solve.add_argument("--slack", type=int, default=None, help="extra source budget")
    p_solve.set_defaults(func=cmd_solve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SceneError, SeriesError, FormError, MorphismError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
