"""Command-line entry point.

Exit codes: 0 success, 2 input or schema error, 3 numerical or degeneracy error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .affine import DEFAULT_THRESH, classify
from .bench import run_bench
from .datagen import PerturbationSpec, Regime, generate, read_dataset, write_dataset
from .errors import GeometryError, InputError, NumericalError, SchemaError
from .geometry import CorrespondenceSet, Homography3, SquareConfig
from .kernel import kernel_to_angular_offsets
from .metrics import evaluate, quartile_summary
from .sks import HomographyParams8, compose_sks, decompose_sks, dlt_four_point, ransac_homography, sks_four_point


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _require_file(path) -> Path:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"no such file: {path}")
    return p


def _require_parent(path) -> Path:
    p = Path(path)
    if not p.parent.exists() and str(p.parent):
        raise InputError(f"output directory does not exist: {p.parent}")
    return p


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def cmd_solve(args) -> int:
    corr = CorrespondenceSet.from_json(_load_json(_require_file(args.input)))
    if args.method == "sks":
        h = sks_four_point(corr)
    elif args.method == "dlt":
        h = dlt_four_point(corr)
    else:
        h, mask = ransac_homography(corr, args.iters, args.thresh, args.seed)
    _emit(h.to_json())
    return 0


def cmd_decompose(args) -> int:
    h = Homography3.from_json(_load_json(_require_file(args.h)))
    cfg = SquareConfig.from_json(_load_json(_require_file(args.cfg)))
    p = decompose_sks(h, cfg)
    _emit(
        {
            "params": p.to_json(),
            "angular_offsets": kernel_to_angular_offsets(p.ker).to_json(),
            "class": classify(p.ker, args.thresh1, args.thresh2).value,
        }
    )
    return 0


def cmd_compose(args) -> int:
    data = _load_json(_require_file(args.params))
    cfg = SquareConfig.from_json(_load_json(_require_file(args.cfg)))
    # accept the output of `decompose` directly
    if isinstance(data, dict) and "params" in data:
        data = data["params"]
    _emit(compose_sks(HomographyParams8.from_json(data), cfg).to_json())
    return 0


def cmd_generate(args) -> int:
    out = _require_parent(args.out)
    spec = PerturbationSpec(
        image_size=args.size, max_offset=args.max_offset, regime=Regime(args.regime), count=args.count, seed=args.seed
    )
    write_dataset(generate(spec), out)
    return 0


def _read_predictions(path, n: int) -> list[Homography3 | HomographyParams8]:
    preds: dict[int, object] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(row, dict) or "sample_id" not in row:
                raise SchemaError(f"{path}:{lineno}: missing sample_id")
            sid = row["sample_id"]
            if not isinstance(sid, int) or not 0 <= sid < n:
                raise SchemaError(f"{path}:{lineno}: sample_id {sid!r} is not in the dataset")
            if sid in preds:
                raise SchemaError(f"{path}:{lineno}: duplicate sample_id {sid}")
            if "H" in row:
                preds[sid] = Homography3.from_json(row["H"])
            elif "params" in row:
                preds[sid] = HomographyParams8.from_json(row["params"])
            else:
                raise SchemaError(f"{path}:{lineno}: prediction needs \"H\" or \"params\"")
    missing = sorted(set(range(n)) - set(preds))
    if missing:
        raise SchemaError(f"{path}: no prediction for sample_id {missing[0]} ({len(missing)} missing)")
    return [preds[i] for i in range(n)]


def cmd_evaluate(args) -> int:
    data_path, pred_path = _require_file(args.data), _require_file(args.pred)
    out = _require_parent(args.out)
    summary_path = _require_parent(args.summary or out.with_suffix(".summary.json"))
    samples = read_dataset(data_path)
    preds = _read_predictions(pred_path, len(samples))

    records = []
    for s, pred in zip(samples, preds):
        h_est = compose_sks(pred, s.cfg) if isinstance(pred, HomographyParams8) else pred
        records.append(evaluate(h_est, s.gt_homography, s.cfg))

    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["sample_id", "ace_po", "ace_ao"])
        for i, r in enumerate(records):
            w.writerow([i, repr(r.ace_po), repr(r.ace_ao)])
    summary = {}
    if records:
        summary = {
            "ace_po": quartile_summary([r.ace_po for r in records]).to_json(),
            "ace_ao": quartile_summary([r.ace_ao for r in records]).to_json(),
        }
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    _emit(summary)
    return 0


def cmd_bench(args) -> int:
    if args.out:
        _require_parent(args.out)
    report = run_bench(args.trials, args.seed, args.repeats)
    print(report.format_table())
    if args.out:
        report.write_csv(args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sks-homography", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="homography from a correspondence file")
    p.add_argument("--input", required=True, help="JSON array of [sx, sy, tx, ty]")
    p.add_argument("--method", choices=["sks", "dlt", "ransac"], default="sks")
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--thresh", type=float, default=3.0, help="RANSAC inlier threshold (pixels)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("decompose", help="eight geometric parameters of a homography")
    p.add_argument("--h", required=True, help="JSON array of 9 numbers, row-major")
    p.add_argument("--cfg", required=True, help='JSON {"cx", "cy", "r"}')
    p.add_argument("--thresh1", type=float, default=DEFAULT_THRESH)
    p.add_argument("--thresh2", type=float, default=DEFAULT_THRESH)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("compose", help="homography from eight geometric parameters")
    p.add_argument("--params", required=True)
    p.add_argument("--cfg", required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("generate", help="synthetic corner-perturbation dataset (JSONL)")
    p.add_argument("--regime", choices=[r.value for r in Regime], required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--size", type=int, default=128)
    p.add_argument("--max-offset", type=float, default=32.0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="ACE in positional and angular offsets")
    p.add_argument("--data", required=True)
    p.add_argument("--pred", required=True, help='JSONL of {"sample_id", "H" | "params"}')
    p.add_argument("--out", required=True, help="per-sample CSV")
    p.add_argument("--summary", help="JSON summary path (default: <out>.summary.json)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", help="compose_sks vs 4-point solvers")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=5, help="calls per trial and method")
    p.add_argument("--out", help="optional CSV path")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except GeometryError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
