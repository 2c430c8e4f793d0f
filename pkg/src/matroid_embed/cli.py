"""matroid-embed command line.

Exit codes: 0 ok, 1 usage or bad input, 2 invariant alarm, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .approx import LoopError, estimate_distortion, full_binary_matroid
from .fileformat import ParseError, parse_matroid_file
from .impossibility import (
    ContradictionAlarm,
    graphic_host_search,
    laminar_host_search,
    rank3_extension_search,
    verify_fixture,
    verify_graphic_fixture,
    verify_laminar_fixtures,
)
from .matroids import EXPLICIT_CAP, GateViolation, check_axioms, is_morphism
from .msp import ALGORITHMS, K_CAP, InfeasibleAcceptance, SCHEME_FOR_FAMILY, estimate_competitive_ratio
from .ome import SCHEMES, PromiseViolation, image_matroid, run_embedding

EXIT_OK, EXIT_USAGE, EXIT_ALARM, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Alarm(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    mf = parse_matroid_file(args.input)
    m = mf.matroid
    print(f"{m.name}: {type(m).__name__} n={m.n} rank={m.full_rank()}")
    if args.verify:
        if m.n > EXPLICIT_CAP:
            raise UsageError(f"--verify is exhaustive and limited to n <= {EXPLICIT_CAP}")
        rep = check_axioms(m)
        if not rep.ok:
            raise Alarm(f"axiom violation: {rep.axiom} witness {rep.witness}")
        print("axioms: ok (exhaustive)")
    return EXIT_OK


def _parse_order(text: str, n: int) -> list[int]:
    try:
        order = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--order must be comma-separated ids, got {text!r}") from None
    if sorted(order) != list(range(n)):
        raise UsageError(f"--order must list each of 0..{n - 1} once")
    return order


def cmd_embed(args) -> int:
    mf = parse_matroid_file(args.input)
    m = mf.matroid
    order = _parse_order(args.order, m.n) if args.order else (mf.order or list(range(m.n)))
    scheme = SCHEMES[args.cls](m.n)
    emb = scheme.make(np.random.default_rng(args.seed))
    try:
        rec = run_embedding(m, order, emb, seed=args.seed)
    except (PromiseViolation, GateViolation) as exc:
        raise Alarm(str(exc)) from None
    if not rec.gate_ok:
        raise Alarm("embedder queried elements outside the arrived prefix")
    images = rec.images(m.n)
    if isinstance(scheme.host, str):
        host, idx = image_matroid(images, rec.p)
        rep = is_morphism(idx, m, host)
    else:
        rep = is_morphism(images, m, scheme.host)
    if not rep.ok:
        raise Alarm(f"result is not a morphism; witness {rep.witness}")
    _emit(args, rec.to_text())
    print(f"# morphism ok ({'exhaustive' if rep.exhaustive else 'sampled'}), injective={rep.injective}", file=sys.stderr)
    return EXIT_OK


MSP_KEYS = {"family", "n", "epsilon", "trials", "seed", "algorithm", "weights", "k_cap", "mode"}


def _msp_config(tokens: list[str], seed: int) -> dict:
    cfg = {"family": "rank1", "n": "10", "epsilon": "0.1", "trials": "1000", "seed": str(seed),
           "algorithm": "dynkin", "weights": "uniform", "k_cap": str(K_CAP), "mode": "auto"}
    for t in tokens:
        if "=" not in t:
            raise UsageError(f"expected key=value, got {t!r}")
        k, v = t.split("=", 1)
        if k not in MSP_KEYS:
            raise UsageError(f"unknown key {k!r}; expected one of {', '.join(sorted(MSP_KEYS))}")
        cfg[k] = v
    try:
        out = {
            "family": cfg["family"],
            "n": int(cfg["n"]),
            "epsilon": float(cfg["epsilon"]),
            "trials": int(cfg["trials"]),
            "seed": int(cfg["seed"]),
            "algorithm": cfg["algorithm"],
            "k_cap": int(cfg["k_cap"]),
            "mode": cfg["mode"],
        }
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if out["family"] not in SCHEME_FOR_FAMILY:
        raise UsageError(f"family must be one of {', '.join(SCHEME_FOR_FAMILY)}")
    if out["algorithm"] not in ALGORITHMS:
        raise UsageError(f"algorithm must be one of {', '.join(ALGORITHMS)}")
    if out["mode"] not in ("auto", "compressed", "materialized"):
        raise UsageError("mode must be auto, compressed or materialized")
    if not 0 < out["epsilon"] < 1 or out["n"] < 1 or out["trials"] < 1:
        raise UsageError("need 0 < epsilon < 1, n >= 1, trials >= 1")
    w = cfg["weights"]
    if w.startswith("adversarial-file:"):
        text = Path(w.split(":", 1)[1]).read_text(encoding="utf-8")
        try:
            out["weights"] = [float(t) for t in text.split()]
        except ValueError as exc:
            raise UsageError(f"bad weight file: {exc}") from None
    elif w in ("uniform", "exp"):
        out["weights"] = w
    else:
        raise UsageError("weights must be uniform, exp or adversarial-file:<path>")
    return out


def cmd_msp(args) -> int:
    cfg = _msp_config(args.config, args.seed)
    try:
        rep = estimate_competitive_ratio(
            cfg["family"], cfg["n"], cfg["epsilon"], cfg["trials"], seed=cfg["seed"],
            algorithm=cfg["algorithm"], weights=cfg["weights"], k_cap=cfg["k_cap"],
            mode=cfg["mode"], threads=args.threads,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except InfeasibleAcceptance as exc:
        raise Alarm(str(exc)) from None
    csv_text = rep.to_csv()
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        print(rep.summary())
    else:
        sys.stdout.write(csv_text)
        print(rep.summary(), file=sys.stderr)
    return EXIT_OK


def cmd_distortion(args) -> int:
    if (args.input is None) == (args.full_binary is None):
        raise UsageError("give exactly one of --in or --full-binary")
    m = full_binary_matroid(args.full_binary) if args.full_binary is not None else parse_matroid_file(args.input).matroid
    rng = np.random.default_rng(args.seed)
    try:
        est = estimate_distortion(m, args.trials, rng)
    except LoopError as exc:
        raise UsageError(f"source must be loop-free: {exc}") from None
    except PromiseViolation as exc:
        raise Alarm(str(exc)) from None
    _emit(args, est.to_csv())
    print(est.summary(), file=sys.stderr if not args.out else sys.stdout)
    if est.violations:
        raise Alarm(f"{est.violations} no-inflation violations")
    return EXIT_OK


def cmd_impossible(args) -> int:
    rng = np.random.default_rng(args.seed)
    parts = []
    try:
        if args.which == "rank3":
            fx = verify_fixture()
            parts.append(fx.to_text())
            if not fx.ok:
                raise Alarm("rank-3 fixture check failed\n" + fx.to_text())
            rep = rank3_extension_search(prefix_samples=args.bound or 100, rng=rng)
        elif args.which == "graphic":
            fx = verify_graphic_fixture()
            parts.append(fx.to_text())
            if not fx.ok:
                raise Alarm("graphic fixture check failed")
            rep = graphic_host_search(args.bound or 6)
        else:
            fx = verify_laminar_fixtures()
            parts.append(fx.to_text())
            if not fx.ok:
                raise Alarm("laminar fixture check failed")
            rep = laminar_host_search(args.bound or 6, args.family)
    except ContradictionAlarm as exc:
        raise Alarm(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    parts.append(rep.to_text())
    _emit(args, "\n".join(parts) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def globals_(suppress: bool) -> argparse.ArgumentParser:
        # subcommands repeat the global flags without overriding values given earlier
        g = argparse.ArgumentParser(add_help=False)
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g.add_argument("--seed", type=int, default=dflt(0), help="64-bit seed for all randomness")
        g.add_argument("--threads", type=int, default=dflt(1), help="worker processes for trial loops")
        g.add_argument("--out", default=dflt(None), help="output file (default stdout)")
        return g

    common = globals_(True)
    p = _Parser(prog="matroid-embed", description="Online matroid embeddings and secretary simulations.", parents=[globals_(False)])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="parse a matroid file, optionally verify axioms")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--verify", action="store_true", help="exhaustive axiom check (n <= 14)")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("embed", parents=[common], help="run an online embedding and write its record")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--class", dest="cls", choices=sorted(SCHEMES), default="binary")
    e.add_argument("--order", help="comma-separated arrival order (default: file order or 0..n-1)")
    e.set_defaults(func=cmd_embed)

    s = sub.add_parser("msp-sim", parents=[common], help="competitive-ratio experiment, key=value config")
    s.add_argument("config", nargs="*", help="family= n= epsilon= trials= seed= algorithm= weights= k_cap= mode=")
    s.set_defaults(func=cmd_msp)

    d = sub.add_parser("distortion", parents=[common], help="estimate distortion of the random-basis embedding")
    d.add_argument("--in", dest="input")
    d.add_argument("--full-binary", type=int, help="use all nonzero vectors of F_2^N")
    d.add_argument("--trials", type=int, default=1000)
    d.set_defaults(func=cmd_distortion)

    i = sub.add_parser("impossible", parents=[common], help="fixture checks and bounded host searches")
    i.add_argument("--which", choices=["rank3", "graphic", "laminar"], required=True)
    i.add_argument("--bound", type=int, help="prefixes (rank3), max vertices (graphic) or max ground size (laminar)")
    i.add_argument("--family", type=int, default=4, help="max laminar family size (laminar only)")
    i.set_defaults(func=cmd_impossible)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Alarm as exc:
        print(f"ALARM: {exc}", file=sys.stderr)
        return EXIT_ALARM
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
