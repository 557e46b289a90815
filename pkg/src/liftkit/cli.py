"""Command-line interface: quotient graphs, liftability checks, generating
set verification, the full pipeline, braid certificates, stabilizer claims,
the finite action self-test, and report rechecking.

Exit codes: 0 success/verified, 2 usage or parse error, 3 enumeration bound
exceeded, 4 verification failure.
"""

import argparse
import json
import os
import random
import sys
import time

from . import symplectic as sp
from . import words
from . import braid
from . import covers as cov
from . import graphs as gr
from . import action
from . import stabilizers as st
from . import pipeline as pl

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BOUND = 3
EXIT_FAILED = 4

DEFAULT_MAX_K = 5
HEAVY_K = 5


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _max_k():
    try:
        return int(os.environ.get("LIFTKIT_MAX_K", str(DEFAULT_MAX_K)))
    except ValueError:
        raise CliError("LIFTKIT_MAX_K must be an integer", EXIT_USAGE)


def _build_cover(args):
    kind = args.cover
    try:
        if kind == "cyclic":
            return cov.make_cover("cyclic", k=args.k)
        if kind == "klein":
            if args.k != 2:
                raise cov.CoverParameterError("klein cover is mod 2 only")
            return cov.make_cover("klein")
        if kind == "elementary":
            return cov.make_cover("elementary", k=args.k, r=args.r, K=args.K)
    except cov.CoverParameterError as e:
        raise CliError(str(e), EXIT_USAGE)
    raise CliError("unknown cover kind %r" % kind, EXIT_USAGE)


def _check_bounds(cover, allow_heavy):
    if cover.k > _max_k():
        raise CliError("k=%d exceeds the enumeration bound %d"
                       % (cover.k, _max_k()), EXIT_BOUND)
    if cover.k >= HEAVY_K and not allow_heavy:
        raise CliError("k=%d is a heavy enumeration; pass --allow-heavy"
                       % cover.k, EXIT_BOUND)


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_bytes(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def render_figure(qg, path):
    """Draw the quotient multigraph to an image file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import math

    n = len(qg.vertices)
    pos = [(math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n))
           for i in range(n)]
    fig, ax = plt.subplots(figsize=(5, 5))
    counts = {}
    for ends, _ in qg.edges:
        counts[ends] = counts.get(ends, 0) + 1
    drawn = {}
    for ends, _ in qg.edges:
        i, j = ends
        idx = drawn.get(ends, 0)
        drawn[ends] = idx + 1
        (x1, y1), (x2, y2) = pos[i], pos[j]
        # spread parallel edges with symmetric bows
        bend = 0.15 * (idx - (counts[ends] - 1) / 2)
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        dx, dy = x2 - x1, y2 - y1
        norm = math.hypot(dx, dy) or 1.0
        cx, cy = mx - bend * dy / norm, my + bend * dx / norm
        ts = [t / 20 for t in range(21)]
        xs = [(1 - t) ** 2 * x1 + 2 * (1 - t) * t * cx + t ** 2 * x2 for t in ts]
        ys = [(1 - t) ** 2 * y1 + 2 * (1 - t) * t * cy + t ** 2 * y2 for t in ts]
        ax.plot(xs, ys, color="tab:blue", zorder=1)
    loop_counts = qg.loop_counts()
    for i, (x, y) in enumerate(pos):
        for m in range(loop_counts[i]):
            r = 0.12 + 0.06 * m
            circ = plt.Circle((x + (0.18 + r) * x, y + (0.18 + r) * y), r,
                              fill=False, color="tab:orange", zorder=1)
            ax.add_patch(circ)
    for i, (rep, size) in enumerate(qg.vertices):
        x, y = pos[i]
        ax.scatter([x], [y], s=300, color="tab:green", zorder=2)
        ax.annotate("%s\n(size %d)" % (",".join(map(str, rep)), size),
                    (x, y), ha="center", va="center", fontsize=7, zorder=3)
    ax.set_title("%s quotient (mod %d)" % (qg.cover_name, qg.k))
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def cmd_quotient_graph(args):
    cover = _build_cover(args)
    _check_bounds(cover, args.allow_heavy)
    try:
        qg = gr.quotient_graph(cover, cover.k)
    except sp.EnumerationBound as e:
        raise CliError(str(e), EXIT_BOUND)
    if args.format == "dot":
        _emit(gr.to_dot(qg), args.out)
    else:
        _emit(_json_bytes(gr.to_json_dict(qg)), args.out)
    if args.figure:
        render_figure(qg, args.figure)
    return EXIT_OK


def cmd_liftable(args):
    cover = _build_cover(args)
    try:
        word = words.parse_word(args.word)
    except words.WordSyntaxError as e:
        raise CliError(str(e), EXIT_USAGE)
    m = words.psi(word)
    liftable = cov.is_liftable(cover, m)
    lines = ["word: %s" % (args.word or "(empty)"),
             "cover: %s" % cover.name,
             "matrix:"]
    for row in m:
        lines.append("  " + " ".join("%4d" % x for x in row))
    if liftable:
        lines.append("LIFTABLE")
    else:
        lines.append("NOT LIFTABLE")
        pattern = cov.congruence_pattern(cover)
        bad = sorted((i, j) for (i, j) in pattern.zero_positions
                     if m[i - 1][j - 1] % pattern.modulus)
        from math import gcd
        bad_units = sorted((i, j) for (i, j) in pattern.unit_positions
                           if gcd(m[i - 1][j - 1], pattern.modulus) != 1)
        if bad or bad_units:
            lines.append("violations: " + ", ".join(
                ["(%d,%d) not 0 mod %d" % (i, j, pattern.modulus)
                 for i, j in bad]
                + ["(%d,%d) not a unit mod %d" % (i, j, pattern.modulus)
                   for i, j in bad_units]))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _read_gens(path):
    gens = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                gens.append(line)
    return gens


def cmd_verify_genset(args):
    cover = _build_cover(args)
    _check_bounds(cover, args.allow_heavy)
    if args.gens:
        try:
            gen_words = _read_gens(args.gens)
            for w in gen_words:
                words.parse_word(w)
        except (OSError, words.WordSyntaxError) as e:
            raise CliError(str(e), EXIT_USAGE)
    else:
        try:
            gen_words = pl.builtin_genset(cover)
        except pl.PipelineError as e:
            raise CliError(str(e), EXIT_USAGE)
    try:
        data = pl.genset_report_data(cover, cover.k, gen_words)
    except sp.EnumerationBound as e:
        raise CliError(str(e), EXIT_BOUND)
    verified = (data["closure_equals_group"]
                and all(g["liftable"] for g in data["generators"]))
    report = {
        "cover": cover.name,
        "k": cover.k,
        "status": "VERIFIED" if verified else "FAILED",
        "generating_set": data,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    _emit(_json_bytes(report), args.out)
    return EXIT_OK if verified else EXIT_FAILED


def cmd_pipeline(args):
    cover = _build_cover(args)
    if cover.kind not in ("cyclic", "klein"):
        raise CliError("pipeline supports cyclic and klein covers", EXIT_USAGE)
    if cover.kind == "cyclic" and not cov._is_prime(cover.k):
        raise CliError("cyclic pipeline needs prime k", EXIT_USAGE)
    _check_bounds(cover, args.allow_heavy)
    try:
        report = pl.run_pipeline(cover)
    except sp.EnumerationBound as e:
        raise CliError(str(e), EXIT_BOUND)
    d = report.to_json_dict()
    d["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    _emit(_json_bytes(d), args.out)
    if args.figure:
        render_figure(gr.quotient_graph(cover, cover.k), args.figure)
    return EXIT_OK if report.status == "VERIFIED" else EXIT_FAILED


def cmd_braid_eq(args):
    try:
        w1 = words.parse_word(args.word1)
        w2 = words.parse_word(args.word2)
    except words.WordSyntaxError as e:
        raise CliError(str(e), EXIT_USAGE)
    if words.contains_iota(w1) or words.contains_iota(w2):
        _emit("UNSUPPORTED(iota)\n", args.out)
        return EXIT_USAGE
    equal = braid.braid_equal(w1, w2)
    psi_agree = words.psi(w1) == words.psi(w2)
    verdict = "EQUAL" if equal else "NOT-EQUAL-IN-ARTIN"
    _emit("%s\npsi_agree: %s\n" % (verdict, psi_agree), args.out)
    return EXIT_OK if equal else EXIT_FAILED


def cmd_stab(args):
    cover = _build_cover(args)
    _check_bounds(cover, args.allow_heavy)
    try:
        claim = st.stab_claim(args.curve, cover)
        rep = st.verify_stab_modk(args.curve, cover, cover.k)
    except st.StabClaimError as e:
        raise CliError(str(e), EXIT_USAGE)
    except sp.EnumerationBound as e:
        raise CliError(str(e), EXIT_BOUND)
    out = {"claim": claim.to_json_dict(), "mod_k": rep}
    _emit(_json_bytes(out), args.out)
    return EXIT_OK if rep["ok"] else EXIT_FAILED


def cmd_graph_action_selftest(args):
    rng = random.Random(args.seed)
    results = []
    ok_all = True
    data_path = os.path.join(os.path.dirname(__file__), os.pardir, os.pardir,
                             "tests", "data", "action_instances.json")
    fixtures = []
    if os.path.exists(data_path):
        with open(data_path) as fh:
            fixtures = json.load(fh)
    for fx in fixtures:
        inst = action.FiniteActionInstance(
            n_vertices=fx["n_vertices"],
            edges=tuple(tuple(e) for e in fx["edges"]),
            elements=tuple(tuple(p) for p in fx["elements"]))
        ok, diag = action.verify_finite_instance(inst)
        ok_all = ok_all and ok == fx["expected"]
        results.append({"name": fx["name"], "ok": ok,
                        "group_order": diag["group_order"]})
    for i in range(args.count):
        inst = action.random_instance(rng)
        ok, diag = action.verify_finite_instance(inst)
        ok_all = ok_all and ok
        results.append({"name": "random_%d" % i, "ok": ok,
                        "group_order": diag["group_order"]})
    _emit(_json_bytes({"ok": ok_all, "instances": results}), args.out)
    return EXIT_OK if ok_all else EXIT_FAILED


_VOLATILE_KEYS = ("timestamp", "timing_s")


def _strip_volatile(d):
    return {key: v for key, v in d.items() if key not in _VOLATILE_KEYS}


def cmd_recheck(args):
    try:
        with open(args.report) as fh:
            stored = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise CliError(str(e), EXIT_USAGE)
    name = stored.get("cover", "")
    if name.startswith("cyclic("):
        cover = cov.make_cover("cyclic", k=int(name[7:-1]))
    elif name == "klein":
        cover = cov.make_cover("klein")
    else:
        raise CliError("cannot rebuild cover %r" % name, EXIT_USAGE)
    _check_bounds(cover, args.allow_heavy)
    if "assembly" in stored:
        fresh = pl.run_pipeline(cover).to_json_dict()
    else:
        gen_words = [g["word"] for g in
                     stored["generating_set"]["generators"]]
        data = pl.genset_report_data(cover, cover.k, gen_words)
        verified = (data["closure_equals_group"]
                    and all(g["liftable"] for g in data["generators"]))
        fresh = {"cover": cover.name, "k": cover.k,
                 "status": "VERIFIED" if verified else "FAILED",
                 "generating_set": data}
    match = _strip_volatile(stored) == _strip_volatile(fresh)
    _emit(_json_bytes({"report": args.report, "match": match}), args.out)
    return EXIT_OK if match else EXIT_FAILED


def _add_cover_flags(p):
    p.add_argument("--cover", choices=("cyclic", "klein", "elementary"),
                   default="cyclic")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--r", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--allow-heavy", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="liftkit",
        description="Generating sets of liftable mapping class groups of "
                    "abelian covers of the genus-2 surface")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quotient-graph", help="emit the quotient multigraph")
    _add_cover_flags(p)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--figure", help="also render a PNG to this path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_quotient_graph)

    p = sub.add_parser("liftable", help="test a twist word for liftability")
    _add_cover_flags(p)
    p.add_argument("word")
    p.add_argument("--out")
    p.set_defaults(func=cmd_liftable)

    p = sub.add_parser("verify-genset", help="verify a generating set mod k")
    _add_cover_flags(p)
    p.add_argument("--gens", help="file with one word per line")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_genset)

    p = sub.add_parser("pipeline", help="run the full verification pipeline")
    _add_cover_flags(p)
    p.add_argument("--figure", help="also render a PNG to this path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("braid-eq", help="certify equality of two words")
    p.add_argument("word1")
    p.add_argument("word2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_braid_eq)

    p = sub.add_parser("stab", help="stabilizer claim and mod-k verification")
    _add_cover_flags(p)
    p.add_argument("--curve", required=True, choices=("a", "b", "c", "e"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_stab)

    p = sub.add_parser("graph-action-selftest",
                       help="verify finite action instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=cmd_graph_action_selftest)

    p = sub.add_parser("recheck", help="replay a report's evidence")
    p.add_argument("report")
    p.add_argument("--allow-heavy", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_recheck)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except CliError as e:
        print("error: %s" % e, file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
