"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 budget exceeded, 4 self-test
failure.  Every subcommand is deterministic given its flags (including
``--seed``); JSON output embeds the full configuration under
``provenance.config`` so ``haltondisc replay FILE`` can re-run it.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

from . import __version__, discrepancy, fourier
from ._core import BACKEND
from .discrepancy import BudgetExceededError, l2_exact, linf_exact, lp_mc
from .io import csv_text, dump_json, points_manifest, read_points_csv, write_points_csv
from .pointsets import DigitPermutationFamily, PointSet, make_pointset
from .radix import BaseSystem, ModulusOverflowError
from .selftest import run_selftest
from .stats import CLT_VARIANTS, clt_samples, ks_normal, moment_report, ratio_table, scaling_table, shape_summary

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_SELFTEST = 0, 2, 3, 4

GEN_VARIANTS = ("halton", "hammersley", "hammersley-sym", "hammersley-sym-dot", "generalized-halton")


class ValidationError(ValueError):
    pass


@dataclass
class RunConfig:
    """Validated flags for one run."""

    command: str
    bases: list[int] | None = None
    variant: str | None = None
    n: int | None = None
    nlist: list[int] | None = None
    q: int = 0
    p: float = 2.0
    exact: bool | None = None
    samples: int = 100_000
    seed: int = 0
    perm_seed: int | None = None
    hmax: int = 6
    cases: int = 200
    block_cases: int = 50
    tolerance: float = 1e-9
    input: str | None = None
    format: str = "json"
    threads: int = 1
    pair_budget: int = field(default_factory=lambda: discrepancy.PAIR_BUDGET)
    grid_budget: int = field(default_factory=lambda: discrepancy.GRID_BUDGET)
    freq_budget: int = field(default_factory=lambda: fourier.FREQ_BUDGET)

    def validate(self) -> "RunConfig":
        if self.bases is not None:
            try:
                BaseSystem(self.bases)
            except ValueError as exc:
                raise ValidationError(f"invalid --bases: {exc}") from None
        if self.n is not None and self.n < 1:
            raise ValidationError("--n must be >= 1")
        if self.nlist is not None and any(v < 2 for v in self.nlist):
            raise ValidationError("--nlist values must be >= 2")
        if not (self.p > 0):
            raise ValidationError("--p must be positive")
        if self.samples < 2:
            raise ValidationError("--samples must be >= 2")
        if self.threads < 1:
            raise ValidationError("--threads must be >= 1")
        if self.format not in ("csv", "json"):
            raise ValidationError("--format must be csv or json")
        if self.command in ("clt", "ratio") and self.variant not in CLT_VARIANTS:
            raise ValidationError(f"--variant must be one of {', '.join(v.replace('_', '-') for v in CLT_VARIANTS)}")
        if self.command == "disc" and self.input is None and (self.variant is None or self.bases is None or self.n is None):
            raise ValidationError("disc needs --input or --variant/--bases/--n")
        if self.command == "disc" and self.exact and math.isfinite(self.p) and self.p != 2:
            raise ValidationError("exact discrepancy is available only for p = 2 and p = inf")
        return self

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["p"] = "inf" if math.isinf(self.p) else self.p
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        d["p"] = float(d.get("p", 2.0))
        names = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names}).validate()


def _bases(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bases must be a comma list of integers, got {text!r}") from None


def parse_nlist(text: str) -> list[int]:
    """``"a,b,c"`` or ``"a..b"`` (powers of two from ``a`` to ``b`` inclusive)."""
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
            out, v = [], 1
            while v <= hi:
                if v >= lo:
                    out.append(v)
                v *= 2
            if not out:
                raise ValueError
            return out
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad N list {text!r}") from None


def _p(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad p {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="haltondisc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--threads", type=int, default=int(os.environ.get("HALTONDISC_THREADS", 1)),
                        help="cap on data parallelism; results do not depend on it")
    common.add_argument("--pair-budget", type=int, default=discrepancy.PAIR_BUDGET,
                        help="max points for exact L2 (env HALTONDISC_PAIR_BUDGET)")
    common.add_argument("--grid-budget", type=int, default=discrepancy.GRID_BUDGET,
                        help="max candidates for exact L_inf (env HALTONDISC_GRID_BUDGET)")
    common.add_argument("--freq-budget", type=int, default=fourier.FREQ_BUDGET,
                        help="max frequencies per Fourier block (env HALTONDISC_FREQ_BUDGET)")

    g = sub.add_parser("gen", parents=[common], help="generate a point set")
    g.add_argument("--variant", choices=GEN_VARIANTS, default="halton")
    g.add_argument("--bases", type=_bases, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--q", type=int, default=0, help="start index (halton variants)")
    g.add_argument("--perm-seed", type=int, help="random digit permutations (generalized-halton)")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--manifest", help="also write a JSON manifest here")

    d = sub.add_parser("disc", parents=[common], help="discrepancy of a point set")
    d.add_argument("--input", help="points CSV (otherwise generated from --variant/--bases/--n)")
    d.add_argument("--variant", choices=GEN_VARIANTS)
    d.add_argument("--bases", type=_bases)
    d.add_argument("--n", type=int)
    d.add_argument("--q", type=int, default=0)
    d.add_argument("--p", type=_p, default=2.0)
    mode = d.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=None)
    mode.add_argument("--mc", dest="exact", action="store_false")
    d.add_argument("--samples", type=int, default=100_000)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--format", choices=("csv", "json"), default="json")

    t = sub.add_parser("selftest", parents=[common], help="run the radix/Fourier oracle batteries")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--cases", type=int, default=200)
    t.add_argument("--block-cases", type=int, default=50)
    t.add_argument("--tolerance", type=float, default=1e-9)

    c = sub.add_parser("clt", parents=[common], help="normalised discrepancy samples and moments")
    c.add_argument("--variant", default="hammersley")
    c.add_argument("--bases", type=_bases, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--samples", type=int, default=4000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--hmax", type=int, default=6)
    c.add_argument("--format", choices=("csv", "json"), default="json")

    s = sub.add_parser("scaling", parents=[common], help="L_p scaling table of Halton segments")
    s.add_argument("--bases", type=_bases, required=True)
    s.add_argument("--p", type=_p, default=2.0)
    s.add_argument("--nlist", type=parse_nlist, required=True)
    s.add_argument("--q", type=int, default=0)
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("csv", "json"), default="csv")

    r = sub.add_parser("ratio", parents=[common], help="L_p / L_2 ratio table against kappa_p^(1/p)")
    r.add_argument("--variant", default="hammersley")
    r.add_argument("--bases", type=_bases, required=True)
    r.add_argument("--p", type=_p, required=True)
    r.add_argument("--nlist", type=parse_nlist, required=True)
    r.add_argument("--samples", type=int, default=20_000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--format", choices=("csv", "json"), default="csv")

    rp = sub.add_parser("replay", help="re-run the configuration stored in a JSON output")
    rp.add_argument("file")
    rp.add_argument("-o", "--output")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for f in dataclasses.fields(RunConfig):
        key = f.name
        if key != "command" and hasattr(ns, key) and getattr(ns, key) is not None:
            setattr(cfg, key, getattr(ns, key))
    if cfg.variant is not None:
        cfg.variant = cfg.variant.replace("-", "_")
    return cfg.validate()


def _apply_budgets(cfg: RunConfig) -> None:
    discrepancy.PAIR_BUDGET = cfg.pair_budget
    discrepancy.GRID_BUDGET = cfg.grid_budget
    fourier.FREQ_BUDGET = cfg.freq_budget


def _pointset(cfg: RunConfig) -> PointSet:
    if cfg.input is not None:
        return PointSet(read_points_csv(cfg.input), {"source": cfg.input})
    perms = None
    if cfg.variant == "generalized_halton" and cfg.perm_seed is not None:
        perms = DigitPermutationFamily.random(cfg.bases, cfg.perm_seed)
    return make_pointset(cfg.variant, cfg.bases, cfg.n, cfg.q, perms)


def _envelope(cfg: RunConfig, result, elapsed: float, extra_prov: dict | None = None) -> dict:
    prov = {"config": cfg.to_dict(), "version": __version__, "backend": BACKEND}
    if extra_prov:
        prov.update(extra_prov)
    return {"provenance": prov, "result": result, "timing": {"elapsed_s": elapsed}}


def execute(cfg: RunConfig) -> tuple[str, int]:
    """Run ``cfg``; return the output text and exit code."""
    _apply_budgets(cfg)
    t0 = time.perf_counter()
    code = EXIT_OK
    if cfg.command == "gen":
        P = _pointset(cfg)
        if cfg.format == "csv":
            buf = io.StringIO()
            write_points_csv(P, buf)
            return buf.getvalue(), code
        result = points_manifest(P)["result"]
        result["points"] = P.points
        doc = _envelope(cfg, result, time.perf_counter() - t0, {"pointset": P.provenance})
    elif cfg.command == "disc":
        P = _pointset(cfg)
        exact = cfg.exact if cfg.exact is not None else (cfg.p == 2 or math.isinf(cfg.p))
        if math.isinf(cfg.p):
            dv = linf_exact(P, cfg.grid_budget)
        elif exact:
            dv = l2_exact(P, cfg.pair_budget, cfg.threads)
        else:
            dv = lp_mc(P, cfg.p, cfg.samples, cfg.seed, cfg.threads)
        rec = dv.to_dict()
        engine_s = rec.pop("elapsed")
        if cfg.format == "csv":
            return csv_text([rec]), code
        doc = _envelope(cfg, rec, time.perf_counter() - t0, {"pointset": P.provenance})
        doc["timing"]["engine_s"] = engine_s
    elif cfg.command == "selftest":
        rep = run_selftest(cfg.seed, cfg.cases, cfg.block_cases, cfg.tolerance)
        rep.pop("elapsed")
        code = EXIT_OK if rep["passed"] else EXIT_SELFTEST
        doc = _envelope(cfg, rep, time.perf_counter() - t0)
    elif cfg.command == "clt":
        S = clt_samples(cfg.variant, cfg.bases, cfg.n, cfg.samples, cfg.seed, cfg.threads)
        if cfg.format == "csv":
            return csv_text([{"j": j, "y": y} for j, y in enumerate(S.values.tolist())]), code
        result = {
            "samples": S.values,
            "moments": moment_report(S, cfg.hmax).to_dict(),
            "shape": shape_summary(S),
            "ks": ks_normal(S),
        }
        doc = _envelope(cfg, result, time.perf_counter() - t0, {"sampleset": S.provenance()})
    elif cfg.command == "scaling":
        rows = scaling_table(cfg.bases, cfg.p, cfg.nlist, cfg.q, cfg.samples, cfg.seed, cfg.threads)
        if cfg.format == "csv":
            return csv_text(rows), code
        doc = _envelope(cfg, {"rows": rows}, time.perf_counter() - t0)
    elif cfg.command == "ratio":
        rows = ratio_table(cfg.variant, cfg.bases, cfg.p, cfg.nlist, cfg.samples, cfg.seed, cfg.threads)
        if cfg.format == "csv":
            return csv_text(rows), code
        doc = _envelope(cfg, {"rows": rows}, time.perf_counter() - t0)
    else:
        raise ValidationError(f"unknown command {cfg.command!r}")
    buf = io.StringIO()
    dump_json(doc, buf)
    return buf.getvalue(), code


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.command == "replay":
            with open(ns.file, encoding="utf-8") as fh:
                cfg = RunConfig.from_dict(json.load(fh)["provenance"]["config"])
            cfg.format = "json"
        else:
            cfg = config_from_args(ns)
        text, code = execute(cfg)
        _write(text, ns.output)
        if ns.command == "gen" and getattr(ns, "manifest", None):
            P = _pointset(cfg)
            man = points_manifest(P, ns.output)
            man["provenance"]["config"] = cfg.to_dict()
            man["timing"] = {}
            with open(ns.manifest, "w", encoding="utf-8") as fh:
                dump_json(man, fh)
        return code
    except (ValidationError, ValueError, KeyError, OSError) as exc:
        print(f"haltondisc: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (BudgetExceededError, ModulusOverflowError) as exc:
        print(f"haltondisc: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
