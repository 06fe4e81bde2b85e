"""Batch command-line front end.

Exit status: 0 success, 1 domain error (JSON on stderr), 2 I/O or parse
error, 3 when ``compare`` finds different barcodes.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import datasets, io
from .complexes import build_cech, build_filtration, build_rips, simplexwise_filtration
from .homology import FieldSpec, field_betti, field_homology, integer_homology, uct_check
from .metric import MetricSpec, check_norm_axioms
from .obstruction import capture_obstruction, rips_representability, verify_vanishing
from .persistence import compare_barcodes, persistent_homology
from .primes import bad_primes_for_filtration, certify_good_prime
from .snf import smith_normal_form

EXIT_DOMAIN, EXIT_IO, EXIT_DIFFER = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits 2 already; keep the JSON shape
        sys.stderr.write(json.dumps({"error": "usage", "message": message}) + "\n")
        raise SystemExit(EXIT_IO)


def _scales(text: str) -> list[float]:
    vals = [float(x) for x in text.split(",") if x.strip()]
    if any(a >= b for a, b in zip(vals, vals[1:])):
        raise argparse.ArgumentTypeError("scales must be strictly increasing")
    return vals


def _max_dim(args: argparse.Namespace) -> int | None:
    if args.skeleton is not None:
        return args.skeleton + 1
    return args.max_dim


def _field(args: argparse.Namespace) -> FieldSpec:
    return FieldSpec.parse(args.field, args.prime)


def cmd_build(args: argparse.Namespace) -> int:
    cloud = io.read_cloud(args.input)
    max_dim = _max_dim(args)
    if args.scales is not None:
        filt = build_filtration(cloud, args.scales, max_dim, args.flavor, args.method)
        io.write(filt.to_json(), args.out)
        return 0
    if args.epsilon is None:
        raise ValueError("build needs --epsilon or --scales")
    if args.flavor == "rips":
        cpx = build_rips(cloud, args.epsilon, max_dim)
    else:
        cpx = build_cech(cloud, args.epsilon, max_dim, args.method)
    payload: dict[str, Any] = cpx.to_json()
    if cpx.diagnostics:
        payload["diagnostics"] = list(cpx.diagnostics)
    io.write(payload, args.out)
    return 0


def cmd_homology(args: argparse.Namespace) -> int:
    if args.scale is not None:
        cpx = io.read_filtration(args.input).stage(args.scale)
    else:
        cpx = io.read_complex(args.input)
    ks = [args.k] if args.k is not None else list(range(max(cpx.dim, 0) + 1))
    cache: dict = {}
    if args.field is not None:
        fld = _field(args)
        rows = [{"k": k, "field": fld.label(), "dim": field_homology(cpx, k, fld)} for k in ks]
    elif args.uct is not None:
        rows = [uct_check(cpx, k, args.uct, cache).to_json() for k in ks]
    else:
        rows = [integer_homology(cpx, k, cache).to_json(k) for k in ks]
    if args.k is not None:
        rows[0].pop("k", None)
        io.write(rows[0], args.out)
    else:
        io.write({"homology": rows}, args.out)
    return 0


def cmd_snf(args: argparse.Namespace) -> int:
    A = io.read_matrix(args.input)
    res = smith_normal_form(A, args.transforms)
    io.write(res.to_json(), args.out)
    return 0


def cmd_primes(args: argparse.Namespace) -> int:
    filt = io.read_filtration(args.input)
    if args.certify is not None:
        cert = certify_good_prime(filt, args.certify, args.max_k)
        io.write(cert.to_json(), args.out)
        return 0 if cert.passed else EXIT_DOMAIN
    io.write(bad_primes_for_filtration(filt, args.max_k).to_json(), args.out)
    return 0


def cmd_persist(args: argparse.Namespace) -> int:
    filt = io.read_filtration(args.input)
    bc = persistent_homology(filt, _field(args), args.max_k)
    if args.text:
        text = bc.to_text()
        if args.out in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(args.out, "w") as fh:
                fh.write(text)
        return 0
    payload = bc.to_json()
    if args.verbose:
        payload["zero_length"] = [{"k": k, "birth": b, "death": d} for k, b, d in bc.zero_length]
    io.write(payload, args.out)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    diff = compare_barcodes(io.read_barcode(args.a), io.read_barcode(args.b))
    io.write(diff.to_json(), args.out)
    return 0 if diff.empty else EXIT_DIFFER


def cmd_obstruct(args: argparse.Namespace) -> int:
    if args.vanishing:
        if args.n is None or args.max_k is None:
            raise ValueError("--vanishing needs --n and --max-k")
        rep = verify_vanishing(io.read_filtration(args.input), args.n, args.max_k)
        io.write(rep.to_json(), args.out)
        return 0
    cpx = io.read_complex(args.input)
    rep = capture_obstruction(cpx, args.n) if args.n is not None else rips_representability(cpx)
    io.write(rep.to_json(), args.out)
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    name = args.dataset
    if name in ("rp2-triangulation", "klein-triangulation"):
        cpx = datasets.DATASETS[name]().complex
        io.write(cpx.to_json(), args.out)
    elif name in ("rp2-filtration", "klein-filtration"):
        ref = datasets.rp2_triangulation() if name.startswith("rp2") else datasets.klein_triangulation()
        io.write(simplexwise_filtration(ref.complex).to_json(), args.out)
    elif name == "circle":
        io.write(datasets.circle_sample(args.n_points, args.circumference).to_json(), args.out)
    elif name == "rp2-sample":
        io.write(datasets.rp2_dense_sample(args.delta).to_json(), args.out)
    elif name == "klein-sample":
        io.write(datasets.klein_sample(args.grid).to_json(), args.out)
    elif name == "random-cloud":
        io.write(datasets.random_cloud(args.n_points, args.dim, args.seed).to_json(), args.out)
    else:
        raise ValueError(f"unknown dataset {name!r}")
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    if args.dataset == "rp2-sample":
        cloud = datasets.rp2_dense_sample(args.delta)
    else:
        cloud = datasets.klein_sample(args.grid)
    filt = build_filtration(cloud, args.scales, args.max_k + 1, "rips")
    fields = (FieldSpec.rationals(), FieldSpec.prime(2))
    rows = [
        {"scale": eps, **{f"betti_{f.label()}": field_betti(stage, f, args.max_k) for f in fields}}
        for eps, stage in filt.stages()
    ]
    payload = {
        "dataset": args.dataset,
        "points": len(cloud),
        "rows": rows,
        "note": "exploratory: no recovery threshold is asserted",
    }
    io.write(payload, args.out)
    return 0


def cmd_axioms(args: argparse.Namespace) -> int:
    if args.metric is None and args.input is None:
        raise ValueError("axioms needs --in or --metric")
    if args.metric is not None:
        metric = MetricSpec.from_json(json.loads(args.metric))
        dim = args.dim
    else:
        cloud = io.read_cloud(args.input)
        metric, dim = cloud.metric, args.dim or cloud.dimension
    rep = check_norm_axioms(metric, args.samples, dim, args.seed)
    io.write(rep.to_json(), args.out)
    return 0 if rep.ok else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="torsionscope", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn, help: str, needs_input: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        if needs_input:
            sp.add_argument("--in", dest="input", required=True, help="input JSON file ('-' for stdin)")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.set_defaults(func=fn)
        return sp

    sp = add("build", cmd_build, "build a Rips or Čech complex or filtration from a point cloud")
    sp.add_argument("--flavor", choices=("rips", "cech"), default="rips")
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--scales", type=_scales, help="comma-separated increasing scales")
    sp.add_argument("--max-dim", type=int)
    sp.add_argument("--skeleton", type=int, help="homology degree of interest; caps dimension at k+1")
    sp.add_argument("--method", choices=("auto", "meb", "minimax"), default="auto")

    sp = add("homology", cmd_homology, "integer, field or UCT homology report")
    sp.add_argument("--k", type=int)
    sp.add_argument("--scale", type=float, help="use this stage of a filtration file")
    sp.add_argument("--field", choices=("q", "zp"))
    sp.add_argument("--prime", type=int)
    sp.add_argument("--uct", type=int, metavar="P", help="universal-coefficient check at prime P")

    sp = add("snf", cmd_snf, "Smith normal form of an integer matrix")
    sp.add_argument("--transforms", action="store_true")

    sp = add("primes", cmd_primes, "bad primes of a filtration, or certify a good prime")
    sp.add_argument("--max-k", type=int, default=1)
    sp.add_argument("--certify", type=int, metavar="P")

    sp = add("persist", cmd_persist, "barcode over a field")
    sp.add_argument("--field", choices=("q", "zp"), default="q")
    sp.add_argument("--prime", type=int)
    sp.add_argument("--max-k", type=int, default=1)
    sp.add_argument("--text", action="store_true", help="one interval per line instead of JSON")
    sp.add_argument("--verbose", action="store_true", help="include zero-length intervals")

    sp = add("compare", cmd_compare, "multiset difference of two barcodes", needs_input=False)
    sp.add_argument("a")
    sp.add_argument("b")

    sp = add("obstruct", cmd_obstruct, "empty-simplex obstructions")
    sp.add_argument("--n", type=int, help="ambient dimension for the Čech capture test")
    sp.add_argument("--vanishing", action="store_true", help="check H_k = 0 above --n on a filtration")
    sp.add_argument("--max-k", type=int)

    sp = add("generate", cmd_generate, "reference complexes and sample clouds", needs_input=False)
    sp.add_argument(
        "--dataset",
        required=True,
        choices=(
            "rp2-triangulation", "klein-triangulation", "rp2-filtration", "klein-filtration",
            "circle", "rp2-sample", "klein-sample", "random-cloud",
        ),
    )
    sp.add_argument("--n-points", type=int, default=12)
    sp.add_argument("--circumference", type=float, default=1.0)
    sp.add_argument("--delta", type=float, default=0.5)
    sp.add_argument("--grid", type=int, default=4)
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("experiment", cmd_experiment, "Rips Betti numbers of a sampled RP2 or Klein bottle", needs_input=False)
    sp.add_argument("--dataset", required=True, choices=("rp2-sample", "klein-sample"))
    sp.add_argument("--scales", type=_scales, required=True)
    sp.add_argument("--max-k", type=int, default=2)
    sp.add_argument("--delta", type=float, default=0.5)
    sp.add_argument("--grid", type=int, default=4)

    sp = add("axioms", cmd_axioms, "sampled norm-axiom check", needs_input=False)
    sp.add_argument("--in", dest="input")
    sp.add_argument("--metric", help="metric JSON, e.g. '{\"kind\": \"randers\", \"b\": [0.5, 0]}'")
    sp.add_argument("--dim", type=int)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except io.InputError as exc:
        sys.stderr.write(json.dumps({"error": "input", "message": str(exc)}) + "\n")
        return EXIT_IO
    except ValueError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
