"""``qusort`` command line: bipartite | tripartite | verify.

stdout carries the report, stderr diagnostics. Exit codes: 0 success,
1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import verify
from .measure import DEFAULT_SEED
from .protocols import (
    BipartiteConfig,
    ConfigError,
    ProtocolResult,
    TripartiteConfig,
    run_bipartite,
    run_tripartite,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
# decimal text like "0.70710678" cannot meet the library's 1e-10 norm check
TEXT_NORM_TOL = 1e-6


class UsageError(Exception):
    pass


def _prob(p: float) -> float:
    return float(f"{p:.15g}")


def parse_alphas(text: str) -> list[complex]:
    """Parse ``"re,im;re,im;..."`` into complex amplitudes."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise UsageError(f"amplitude {chunk!r} is not of the form re,im")
        try:
            out.append(complex(float(parts[0]), float(parts[1])))
        except ValueError:
            raise UsageError(f"amplitude {chunk!r} is not numeric") from None
    return out


def normalize_text_alphas(alphas: list[complex]) -> list[complex]:
    """Rescale typed amplitudes that are normalized to within ``TEXT_NORM_TOL``."""
    total = sum(abs(a) ** 2 for a in alphas)
    if not alphas or abs(total - 1.0) > TEXT_NORM_TOL:
        raise UsageError(f"amplitudes are not normalized: sum |alpha|^2 = {total!r}")
    scale = total ** -0.5
    return [a * scale for a in alphas]


def _branch_terms(state) -> list[list[int]]:
    """Label tuples of every basis ket present in a branch state."""
    nz = (abs(state.amplitudes) > 1e-12).nonzero()[0]
    return [list(state.layout.decode(i)) for i in nz]


def build_report(result: ProtocolResult, config: dict) -> dict:
    report = dict(config)
    report["distribution"] = [
        {"labels": list(k), "prob": _prob(p)} for k, p in result.joint_port_distribution.items()
    ]
    report["certainty"] = result.certainty
    report["branches"] = [
        {
            "alice_outcome": b.outcome[0],
            "prob": _prob(b.probability),
            "labels": _branch_terms(b.post_state),
        }
        for b in result.branches
    ]
    if result.shots is not None:
        report["shots"] = {
            "seed": result.shots.seed,
            "counts": [{"labels": list(k), "count": c} for k, c in result.shots.counts.items()],
        }
    return report


def config_from_report(report: dict) -> BipartiteConfig | TripartiteConfig:
    """Rebuild the run configuration from a report's config echo."""
    inputs = report["inputs"]
    if report["protocol"] == "bipartite":
        alphas = [complex(re, im) for re, im in report["alphas"]]
        return BipartiteConfig(report["dim"], alphas, inputs["a"], inputs["b"])
    return TripartiteConfig(report["state"], inputs["a"], inputs["b"], inputs["c"])


def render_text(report: dict) -> str:
    lines = [f"protocol: {report['protocol']}"]
    if "state" in report:
        lines.append(f"state: {report['state']}")
    lines.append(f"dim: {report['dim']}")
    if report.get("alphas") is not None:
        lines.append("alphas: " + "; ".join(f"{re!r},{im!r}" for re, im in report["alphas"]))
    lines.append("inputs: " + " ".join(f"{k}={v}" for k, v in report["inputs"].items()))
    lines.append("distribution:")
    for row in report["distribution"]:
        lines.append(f"  {tuple(row['labels'])}  {row['prob']:.15g}")
    lines.append(f"certainty: {str(report['certainty']).lower()}")
    lines.append("branches:")
    for b in report["branches"]:
        kets = " + ".join(str(tuple(t)) for t in b["labels"])
        lines.append(f"  alice={b['alice_outcome']}  prob={b['prob']:.15g}  state={kets}")
    if "shots" in report:
        lines.append(f"shots (seed {report['shots']['seed']}):")
        for row in report["shots"]["counts"]:
            lines.append(f"  {tuple(row['labels'])}  {row['count']}")
    return "\n".join(lines)


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2))
    else:
        print(render_text(report))


def cmd_bipartite(args) -> int:
    alphas = normalize_text_alphas(parse_alphas(args.alphas))
    cfg = BipartiteConfig(args.dim, alphas, args.input_a, args.input_b)
    result = run_bipartite(cfg, shots=args.shots, seed=args.seed)
    config = {
        "protocol": "bipartite",
        "dim": cfg.dim,
        "alphas": [[a.real, a.imag] for a in cfg.alphas],
        "inputs": {"a": cfg.m, "b": cfg.n},
    }
    _emit(build_report(result, config), args.format)
    return EXIT_OK


def cmd_tripartite(args) -> int:
    cfg = TripartiteConfig(args.state, args.input_a, args.input_b, args.input_c)
    result = run_tripartite(cfg, shots=args.shots, seed=args.seed)
    config = {
        "protocol": "tripartite",
        "state": cfg.which,
        "dim": 2,
        "alphas": None,
        "inputs": {"a": cfg.m, "b": cfg.n, "c": cfg.p},
    }
    _emit(build_report(result, config), args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.max_dim < 2:
        raise UsageError("--max-dim must be >= 2")
    rows = verify.run_checks(args.max_dim)
    width = max(len(c) for c in verify.CHECKS)
    print("D   " + "  ".join(c.ljust(width) for c in verify.CHECKS))
    for row in rows:
        cells = ("pass" if row.results[c] else "FAIL" for c in verify.CHECKS)
        print(f"{row.dim:<3} " + "  ".join(c.ljust(width) for c in cells))
    failure = verify.first_failure(rows)
    if failure is not None:
        d, name = failure
        print(f"verification failed: {name} (D={d})", file=sys.stderr)
        return EXIT_FAIL
    print("all checks passed")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--shots", type=int, default=None, help="number of sampled detector clicks")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="SplitMix64 seed (default %(default)s)")
    p.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qusort", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    bi = sub.add_parser("bipartite", help="two-party quDit protocol")
    bi.add_argument("--dim", type=int, required=True)
    bi.add_argument("--alphas", required=True, help='entangled amplitudes as "re,im;re,im;..."')
    bi.add_argument("--input-a", type=int, default=0)
    bi.add_argument("--input-b", type=int, default=0)
    _add_run_flags(bi)
    bi.set_defaults(func=cmd_bipartite)

    tri = sub.add_parser("tripartite", help="three-party GHZ or W protocol")
    tri.add_argument("--state", required=True, choices=("ghz", "w"))
    tri.add_argument("--input-a", type=int, default=0)
    tri.add_argument("--input-b", type=int, default=0)
    tri.add_argument("--input-c", type=int, default=0)
    _add_run_flags(tri)
    tri.set_defaults(func=cmd_tripartite)

    ver = sub.add_parser("verify", help="check sorter identities for D = 2..max-dim")
    ver.add_argument("--max-dim", type=int, default=8)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "shots", None) is not None and args.shots < 1:
            raise UsageError("--shots must be >= 1")
        return args.func(args)
    except (UsageError, ConfigError, ValueError) as exc:
        print(f"qusort: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
