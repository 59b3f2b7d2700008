"""Command-line interface.

Exit codes: 0 success, 2 validation failure, 3 certification failure,
4 budget exceeded.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import search
from .chain_ring import BudgetExceeded, make_ring
from .codes import (
    Code,
    free_code,
    permutation_code,
    pyrope_class_map,
    sperner_code,
    exact_card_d2,
    exact_card_maxdist,
    star_configuration,
)
from .counting import (
    ball_polynomial,
    grassmannian_count,
    leading_term,
    sphere_polynomial,
    submodule_count,
)
from .metric import ball, half_distance_matrix, sphere
from .submodule import (
    HomothetyClass,
    enumerate_boundary,
    enumerate_classes,
    enumerate_grassmannian,
    enumerate_submodules,
    is_subset,
    scale_pi,
)

log = logging.getLogger("submodcodes")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CERT_FAIL = 3
EXIT_BUDGET = 4


class CertificationFailure(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    kind: str = "integer-modular"
    p: int = 2
    s: int = 1
    r: int = 1
    d: int = 2
    params: dict = field(default_factory=dict)
    out: str | None = None
    budget: int | None = None
    vertex_budget: int = search.VERTEX_BUDGET
    seed: int = 0

    @property
    def ring(self):
        return make_ring(self.kind, self.p, self.s, self.r)


class _RingAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        kind = values[0]
        if kind in ("z", "integer-modular"):
            if len(values) != 2:
                parser.error("--ring z takes one argument: p")
            namespace.ring = ("integer-modular", int(values[1]), 1)
        elif kind in ("poly", "truncated-polynomial"):
            if len(values) != 3:
                parser.error("--ring poly takes two arguments: p s")
            namespace.ring = ("truncated-polynomial", int(values[1]), int(values[2]))
        else:
            parser.error(f"unknown ring kind {kind!r}; use z or poly")


def _common(sub: argparse.ArgumentParser, ring=True):
    if ring:
        sub.add_argument("--ring", nargs="+", action=_RingAction, default=("integer-modular", 2, 1),
                         metavar="KIND P [S]", help="`z p` for Z/p^r or `poly p s` for F_{p^s}[t]/(t^r)")
        sub.add_argument("--r", type=int, default=1, help="nilpotency index")
    sub.add_argument("--d", type=int, default=2, help="ambient rank")
    sub.add_argument("--out", help="output file (default stdout)")
    sub.add_argument("--budget", type=int, help="enumeration guard (overrides SUBMODCODES_BUDGET)")
    sub.add_argument("--vertex-budget", type=int, default=search.VERTEX_BUDGET)
    sub.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="submodcodes", description="Spherical codes of submodules over finite chain rings.")
    ap.add_argument("-v", "--verbose", action="store_true")
    subs = ap.add_subparsers(dest="command", required=True)

    p = subs.add_parser("enumerate", help="list submodules, classes, balls, spheres or Grassmannians")
    _common(p)
    p.add_argument("--what", choices=["submodules", "classes", "ball", "sphere", "boundary", "grassmannian"],
                   default="classes")
    p.add_argument("--n", type=int, help="rank for --what grassmannian")
    p.add_argument("--ell", type=int, help="radius for ball/sphere (default r)")
    p.add_argument("--count-only", action="store_true")

    p = subs.add_parser("code", help="construct a code")
    p.add_argument("construction", choices=["sperner", "perm", "free", "star"])
    _common(p)
    p.add_argument("--alpha", type=int)
    p.add_argument("--eps", type=lambda t: tuple(int(x) for x in t.split(",")), help="comma separated type")
    p.add_argument("--n", type=int)

    p = subs.add_parser("dist", help="distance matrix of a code file as CSV")
    _common(p, ring=False)
    p.add_argument("--in", dest="infile", required=True)

    p = subs.add_parser("search", help="exact extremal values by clique search")
    p.add_argument("task", choices=["card", "dist", "certify"])
    _common(p)
    p.add_argument("--psi", type=int)
    p.add_argument("--chi", type=int)
    p.add_argument("--grid", default="small", help=f"one of {sorted(search.GRIDS)} or a JSON file of points")
    p.add_argument("--witness-dir", help="write witness codes here")

    p = subs.add_parser("count", help="counting polynomials and closed forms")
    p.add_argument("what", choices=["ball", "sphere", "submodules", "grassmannian"])
    _common(p, ring=False)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--q", type=int)
    p.add_argument("--n", type=int)

    p = subs.add_parser("export-dot", help="DOT graph of homothety classes")
    _common(p)
    p.add_argument("--diagonal-only", action="store_true")
    p.add_argument("--highlight", help="code file whose members are marked")
    p.add_argument("--highlight-sphere", type=int, metavar="ELL")
    return ap


def resolve_config(args) -> RunConfig:
    kind, p, s = getattr(args, "ring", ("integer-modular", 2, 1))
    skip = {"ring", "r", "d", "out", "budget", "vertex_budget", "seed", "command", "verbose"}
    params = {k: v for k, v in vars(args).items() if k not in skip}
    cfg = RunConfig(args.command, kind, p, s, getattr(args, "r", 1), args.d, params,
                    args.out, args.budget, args.vertex_budget, args.seed)
    if cfg.d < 1 or cfg.r < 1:
        raise ValueError("d and r must be positive")
    if args.command not in ("count", "dist"):
        cfg.ring  # validates p, s, r
    return cfg


# ---------------------------------------------------------------------------
# output helpers


class _Output:
    def __init__(self, path):
        self.path = path
        self.fh = open(path, "w", encoding="utf-8", newline="\n") if path else sys.stdout

    def line(self, text=""):
        self.fh.write(text + "\n")

    def json(self, obj):
        self.line(json.dumps(obj))

    def close(self):
        if self.path:
            self.fh.close()
        else:
            self.fh.flush()


def _poly_summary(poly, q):
    return {"polynomial": str(poly), "value": poly(q)}


# ---------------------------------------------------------------------------
# subcommands


def cmd_enumerate(cfg: RunConfig, out: _Output) -> int:
    ring, d, r, q = cfg.ring, cfg.d, cfg.r, cfg.ring.q
    what = cfg.params["what"]
    ell = cfg.params.get("ell")
    ell = r if ell is None else ell
    summary = {"what": what}
    if what == "submodules":
        items = enumerate_submodules(ring, d, cfg.budget)
        summary["expected"] = submodule_count(d, q, r)
    elif what == "classes":
        items = (c.rep for c in enumerate_classes(ring, d, cfg.budget))
        summary.update(_poly_summary(ball_polynomial(d, r), q))
    elif what == "ball":
        items = (c.rep for c in ball(ring, d, ell, cfg.budget))
        summary.update(_poly_summary(ball_polynomial(d, ell), q), ell=ell)
    elif what == "sphere":
        items = (c.rep for c in sphere(ring, d, ell, cfg.budget))
        summary.update(_poly_summary(sphere_polynomial(d, ell), q), ell=ell)
    elif what == "boundary":
        items = enumerate_boundary(ring, d, cfg.budget)
        summary.update(_poly_summary(sphere_polynomial(d, r), q))
    else:
        n = cfg.params.get("n")
        if n is None or not 1 <= n <= d - 1:
            raise ValueError(f"--n must be given with 1 <= n <= d-1 (d={d})")
        items = enumerate_grassmannian(ring, d, n, cfg.budget)
        summary["expected"] = grassmannian_count(d, n, q, r)
        summary["n"] = n
    count = 0
    for U in items:
        count += 1
        if not cfg.params.get("count_only"):
            out.json(U.to_json())
    expected = summary.pop("value", summary.get("expected"))
    summary["expected"] = expected
    summary["count"] = count
    summary["status"] = "PASS" if count == expected else "FAIL"
    out.json(summary)
    if count != expected:
        raise CertificationFailure(f"enumerated {count}, formula gives {expected}")
    return EXIT_OK


def cmd_code(cfg: RunConfig, out: _Output) -> int:
    ring, d = cfg.ring, cfg.d
    kind = cfg.params["construction"]
    if kind == "sperner":
        alpha = cfg.params.get("alpha")
        if alpha is None:
            raise ValueError("sperner needs --alpha")
        code = sperner_code(ring, d, alpha, budget=cfg.budget)
    elif kind == "perm":
        eps = cfg.params.get("eps")
        if eps is None or len(eps) != d:
            raise ValueError(f"perm needs --eps with {d} entries")
        code = permutation_code(ring, eps)
    elif kind == "free":
        n = cfg.params.get("n")
        if n is None:
            raise ValueError("free needs --n")
        code = free_code(ring, d, n)
    else:
        code = star_configuration(ring, d)
    out.json(code.to_json())
    print(f"cardinality: {code.cardinality}  min_distance: {code.min_distance}", file=sys.stderr)
    return EXIT_OK


def cmd_dist(cfg: RunConfig, out: _Output) -> int:
    with open(cfg.params["infile"], encoding="utf-8") as fh:
        code = Code.from_json(json.load(fh))
    out.fh.write(code.matrix.to_csv())
    print(f"min_distance: {code.min_distance}", file=sys.stderr)
    return EXIT_OK


def _load_grid(spec: str):
    if spec in search.GRIDS:
        return search.GRIDS[spec]
    path = Path(spec)
    if not path.exists():
        raise ValueError(f"unknown grid {spec!r}")
    points = json.loads(path.read_text(encoding="utf-8"))
    return [tuple(pt) for pt in points]


def cmd_search(cfg: RunConfig, out: _Output) -> int:
    ring, d, r, q = cfg.ring, cfg.d, cfg.r, cfg.ring.q
    task = cfg.params["task"]
    vb = cfg.vertex_budget
    if task == "card":
        psi = cfg.params.get("psi")
        if psi is None:
            raise ValueError("card needs --psi")
        value, witness = search.card_exact(ring, d, psi, budget=vb)
        result = {"task": "card", "psi": psi, "value": value, "witness": witness.to_json()}
        if psi % 2 == 0 and (d == 2 or psi == 2 * r):
            expected = exact_card_d2(q, r, psi // 2) if d == 2 else exact_card_maxdist(d, q, r)
            result["expected"] = expected
            result["status"] = "PASS" if value == expected else "FAIL"
        out.json(result)
        if result.get("status") == "FAIL":
            raise CertificationFailure(f"found {value}, closed form {result['expected']}")
        return EXIT_OK
    if task == "dist":
        chi = cfg.params.get("chi")
        if chi is None:
            raise ValueError("dist needs --chi")
        value, witness = search.dist_exact(ring, d, chi, budget=vb)
        result = {"task": "dist", "chi": chi, "value": value, "witness": witness.to_json()}
        if chi == d + 1:
            result["expected"] = 2 * r
            result["status"] = "PASS" if value == 2 * r else "FAIL"
        out.json(result)
        if result.get("status") == "FAIL":
            raise CertificationFailure(f"found {value}, expected {2 * r}")
        return EXIT_OK
    witnesses: dict = {}
    grid = _load_grid(cfg.params["grid"])
    report = search.certify_theorems(grid, witnesses, budget=vb)
    wdir = cfg.params.get("witness_dir")
    if wdir:
        Path(wdir).mkdir(parents=True, exist_ok=True)
        for ref, code in witnesses.items():
            (Path(wdir) / f"{ref}.json").write_text(json.dumps(code.to_json()) + "\n", encoding="utf-8")
    out.line(json.dumps(report, indent=1))
    failed = [e for e in report if e["status"] == "FAIL"]
    if failed:
        raise CertificationFailure(f"{len(failed)} certification entries failed")
    return EXIT_OK


def cmd_count(cfg: RunConfig, out: _Output) -> int:
    d, r = cfg.d, cfg.r
    q = cfg.params.get("q")
    what = cfg.params["what"]
    result: dict = {"what": what, "d": d, "r": r}
    if what in ("ball", "sphere"):
        poly = ball_polynomial(d, r) if what == "ball" else sphere_polynomial(d, r)
        result["polynomial"] = str(poly)
        if what == "ball":
            coeff, degree = poly.leading_term()
            expected = leading_term(d, r)
            result["leading_term"] = [coeff, degree]
            result["expected_leading_term"] = list(expected)
            result["status"] = "PASS" if (coeff, degree) == expected else "FAIL"
        if q is not None:
            result["value"] = poly(q)
    else:
        if q is None:
            raise ValueError(f"count {what} needs --q")
        if what == "submodules":
            result["value"] = submodule_count(d, q, r)
        else:
            n = cfg.params.get("n")
            if n is None or not 0 <= n <= d:
                raise ValueError(f"--n must be given with 0 <= n <= d (d={d})")
            result["value"] = grassmannian_count(d, n, q, r)
    out.json(result)
    if result.get("status") == "FAIL":
        raise CertificationFailure("leading term disagrees with the closed form")
    return EXIT_OK


def _dot_label(c: HomothetyClass) -> str:
    return c.rep.text()


def cmd_export_dot(cfg: RunConfig, out: _Output) -> int:
    ring, d = cfg.ring, cfg.d
    diagonal = cfg.params.get("diagonal_only")
    if d != 2 and not diagonal:
        raise ValueError("tree rendering needs d = 2; use --diagonal-only for d > 2")
    if diagonal:
        classes = sorted(set(pyrope_class_map(ring, d).values()))
    else:
        classes = sorted(enumerate_classes(ring, d, cfg.budget))
    marked: dict[int, str] = {}
    index = {c.rep: i for i, c in enumerate(classes)}
    if cfg.params.get("highlight"):
        with open(cfg.params["highlight"], encoding="utf-8") as fh:
            code = Code.from_json(json.load(fh))
        for c in code.members:
            if c.rep not in index:
                raise ValueError("highlighted code member is not among the exported classes")
            marked[index[c.rep]] = "blue"
    ell = cfg.params.get("highlight_sphere")
    if ell is not None:
        for c in sphere(ring, d, ell, cfg.budget):
            if c.rep in index:
                marked[index[c.rep]] = "red"
    D = half_distance_matrix(classes).D
    out.line("graph classes {")
    out.line("  node [shape=point];")
    for i, c in enumerate(classes):
        attrs = f'label="", tooltip="{_dot_label(c)}"'
        if i in marked:
            attrs += f", color={marked[i]}, width=0.15"
        out.line(f"  v{i} [{attrs}];")
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            if D[i, j] != 1:
                continue
            A, B = classes[i].rep, classes[j].rep
            # the classes are adjacent when pi B < A < B for suitable representatives
            if not ((is_subset(A, B) and is_subset(scale_pi(B, 1), A))
                    or (is_subset(B, A) and is_subset(scale_pi(A, 1), B))):
                raise AssertionError("distance-one pair without nested representatives")
            out.line(f"  v{i} -- v{j};")
    out.line("}")
    print(f"vertices: {len(classes)}  marked: {len(marked)}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "code": cmd_code,
    "dist": cmd_dist,
    "search": cmd_search,
    "count": cmd_count,
    "export-dot": cmd_export_dot,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.DEBUG if args.verbose else logging.INFO)
    try:
        return _run(args)
    finally:
        log.removeHandler(handler)


def _run(args) -> int:
    try:
        cfg = resolve_config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    log.info("config %s", json.dumps(dataclasses.asdict(cfg), default=str))
    out = _Output(cfg.out)
    try:
        return COMMANDS[cfg.command](cfg, out)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CertificationFailure as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_CERT_FAIL
    except (ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    finally:
        out.close()


if __name__ == "__main__":
    sys.exit(main())
