"""Command line entry point.

Exit status: 0 on success, 1 on a fatal error, 2 when the command finished
but recorded diagnostics (partial results). Results go to stdout as JSON
unless a subcommand writes files.
"""
import argparse
import csv
import json
import math
import sys
from dataclasses import asdict

from . import __version__
from .campaign import evaluate_campaign
from .detection import asv_assessment, cm_eer
from .errors import EmptyTable, EvalError, IoFailure, MissingField
from .report import emit_report
from .score_io import load_manifest, parse_transcripts, parse_trial_scores, scores_of
from .stats import ols_regress, pearson
from .tandem import AsvOperatingPoint, CostModel, asv_operating_point, min_tdcf, tandem_constants
from .wer import wer

EXIT_OK, EXIT_FATAL, EXIT_DIAGNOSTICS = 0, 1, 2


def _plain(x):
    """JSON-safe copy: non-finite floats become their repr strings."""
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def _dump(obj):
    json.dump(_plain(obj), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _scores(path, label=None):
    """Scores of a trial file; a file mixing labels is filtered to ``label``."""
    trials = parse_trial_scores(path, default_label="target")
    if label is not None and len({t.label for t in trials}) > 1:
        return scores_of(trials, label)
    return scores_of(trials)


def cmd_campaign(args):
    manifest = load_manifest(args.manifest)
    report = evaluate_campaign(manifest)
    paths = emit_report(report, args.format, args.out)
    for path in paths:
        print(path)
    for d in report.diagnostics:
        print(f"diagnostic: {d.task_id} {d.team_id} {d.metric}: {d.cause}: {d.detail}", file=sys.stderr)
    return EXIT_DIAGNOSTICS if report.diagnostics else EXIT_OK


def cmd_asv(args):
    m = asv_assessment(
        _scores(args.natural_tar, "target"), _scores(args.natural_non, "nontarget"), _scores(args.conv_tar),
        _scores(args.genuine_tar), _scores(args.conv_src),
    )
    _dump({"asv_eer_pct": m.eer_pct, "pfa_tar_pct": m.pfa_tar_pct, "pmiss_src_pct": m.pmiss_src_pct,
           "threshold": m.threshold_natural})
    return EXIT_OK


def cmd_cm(args):
    res = cm_eer(_scores(args.bona), _scores(args.spoof))
    _dump({"cm_eer_pct": res.eer_pct, "threshold": res.threshold})
    return EXIT_OK


def _load_asv_op(path):
    """A JSON operating point, or a labelled ASV score file (target/nontarget/spoof)."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        trials = parse_trial_scores(path)
        return asv_operating_point(scores_of(trials, "target"), scores_of(trials, "nontarget"),
                                   scores_of(trials, "spoof"))
    try:
        return AsvOperatingPoint(float(doc["p_miss_asv"]), float(doc["p_fa_asv"]), float(doc["p_fa_spoof_asv"]))
    except KeyError as exc:
        raise MissingField(f"asv operating point: {exc.args[0]}") from exc


def cmd_tdcf(args):
    op = _load_asv_op(args.asv_op)
    cost_model = CostModel()
    if args.cost_model:
        with open(args.cost_model, encoding="utf-8") as fh:
            cost_model = CostModel.from_dict(json.load(fh))
    res = min_tdcf(_scores(args.bona), _scores(args.spoof), tandem_constants(op, cost_model))
    c0, c1, c2 = res.constants
    _dump({"min_tdcf_norm": res.min_tdcf_norm, "cm_threshold": res.cm_threshold,
           "C0": c0, "C1": c1, "C2": c2, "asv_operating_point": asdict(op)})
    return EXIT_OK


def cmd_wer(args):
    pairs = parse_transcripts(args.pairs, normalize=not args.no_normalize)
    _dump({"wer_pct": wer(pairs), "utterances": len(pairs)})
    return EXIT_OK


def _read_table(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise EmptyTable(f"{path} has no rows")
    key = next(iter(rows[0]))
    table = {}
    for col in rows[0]:
        if col == key:
            continue
        vals = {}
        for r in rows:
            cell = (r.get(col) or "").strip()
            if cell:
                try:
                    vals[r[key]] = float(cell)
                except ValueError:
                    break
        else:
            table[col] = vals
    return table


def _pick(table, names, what):
    for n in names:
        if n not in table:
            raise MissingField(f"{what} column {n!r}")
    return names


def cmd_stats(args):
    table = _read_table(args.table)
    diagnostics = []
    if args.kind == "corr":
        ys = _pick(table, args.y or sorted(table), "y")
        xs = _pick(table, args.x or sorted(table), "x")
        out = []
        for y in ys:
            for x in xs:
                if x == y:
                    continue
                common = sorted(set(table[x]) & set(table[y]))
                try:
                    res = pearson([table[x][k] for k in common], [table[y][k] for k in common])
                    out.append({"x": x, "y": y, "r": res.r, "p": res.p_two_sided, "n": res.n})
                except EvalError as exc:
                    diagnostics.append({"x": x, "y": y, "error": type(exc).__name__, "detail": str(exc)})
        _dump({"correlations": out, "diagnostics": diagnostics})
    else:
        if not args.y or len(args.y) != 1:
            raise MissingField("regress needs exactly one --y column")
        y = _pick(table, args.y, "y")[0]
        xs = _pick(table, args.x or [c for c in sorted(table) if c != y], "x")
        keys = sorted(set(table[y]).intersection(*(table[x] for x in xs)))
        res = ols_regress([[table[x][k] for x in xs] for k in keys], [table[y][k] for k in keys],
                          include_intercept=not args.no_intercept)
        _dump({
            "y": y, "predictors": list(xs), "n": res.n, "df_resid": res.df_resid,
            "intercept": res.intercept, "intercept_p": res.intercept_p_value,
            "coefficients": dict(zip(xs, res.coefficients.tolist())),
            "p_values": dict(zip(xs, res.coef_p_values.tolist())),
            "std_errors": dict(zip(xs, res.std_errors.tolist())),
            "r_squared": res.r_squared, "adjusted_r_squared": res.adjusted_r_squared,
            "f_statistic": res.f_statistic, "significance_f": res.significance_f,
        })
    return EXIT_DIAGNOSTICS if diagnostics else EXIT_OK


def cmd_fixture(args):
    from .oracle import FixtureSpec, generate_fixture

    with open(args.spec, encoding="utf-8") as fh:
        spec = FixtureSpec.from_dict(json.load(fh))
    manifest_path, _ = generate_fixture(spec, args.out)
    print(manifest_path)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="vcceval", description="Objective evaluation of voice conversion systems.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("campaign", help="evaluate every team in a manifest and write a report")
    c.add_argument("--manifest", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--format", choices=("csv", "json", "md", "markdown"), default="csv")
    c.set_defaults(func=cmd_campaign)

    a = sub.add_parser("asv", help="ASV EER, Pfa and Pmiss for one system")
    for flag in ("--natural-tar", "--natural-non", "--conv-tar", "--genuine-tar", "--conv-src"):
        a.add_argument(flag, required=True)
    a.set_defaults(func=cmd_asv)

    m = sub.add_parser("cm", help="countermeasure EER")
    m.add_argument("--bona", required=True)
    m.add_argument("--spoof", required=True)
    m.set_defaults(func=cmd_cm)

    t = sub.add_parser("tdcf", help="normalized minimum t-DCF")
    t.add_argument("--bona", required=True)
    t.add_argument("--spoof", required=True)
    t.add_argument("--asv-op", required=True, help="JSON operating point or labelled ASV score file")
    t.add_argument("--cost-model", help="JSON cost model")
    t.set_defaults(func=cmd_tdcf)

    w = sub.add_parser("wer", help="pooled word error rate")
    w.add_argument("--pairs", required=True, help="lines of 'utt_id | reference | hypothesis'")
    w.add_argument("--no-normalize", action="store_true", help="keep case and punctuation")
    w.set_defaults(func=cmd_wer)

    s = sub.add_parser("stats", help="correlation or regression over a team table")
    s.add_argument("kind", choices=("corr", "regress"))
    s.add_argument("--table", required=True, help="CSV with a team id column first")
    s.add_argument("--y", action="append", help="response column (repeatable for corr)")
    s.add_argument("--x", action="append", help="predictor column (repeatable)")
    s.add_argument("--no-intercept", action="store_true")
    s.set_defaults(func=cmd_stats)

    f = sub.add_parser("fixture", help="write a synthetic campaign with oracle-computed expectations")
    f.add_argument("--spec", required=True, help="JSON fixture spec")
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_fixture)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EvalError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
