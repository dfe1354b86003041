"""symdyn command line: every subcommand writes a Report and exits with its verdict code.

Exit status: 0 holds/pass, 1 fails, 2 inconclusive, 3 bad input, 4 internal limit hit.
"""
from __future__ import annotations

import functools
import sys
from pathlib import Path

import click

from . import __version__
from . import counterexample as ce
from .cache import CountCache, default_cache_dir
from .docio import load_shift_spec
from .entropy import (
    ReducibleError,
    bound_audit,
    entropy_report,
    exact_entropy,
    periodic_orbit_measure,
    periodic_points,
    sft_mme,
    tv_distance,
)
from .language import enumerate_language, language_counts
from .mistake import MistakeFunction
from .properties import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    check_almost_spec,
    check_irreducible,
    check_specification,
    min_mistakes_left,
)
from .reports import Report
from .structure import (
    build_gluing,
    check_closure_conditions,
    check_gluing_identity,
    classify_word,
    measure_center_approx,
    obstruction_entropies,
)
from .words import BudgetExceededError, InputError, InsufficientDepthError, SymdynError
from .zoo import SFT, make_shift

EXIT_INPUT, EXIT_LIMIT = 3, 4


def parse_horizon(text: str, parts=(1,)) -> tuple:
    """Comma-separated positive lengths; one value is repeated to the largest allowed size."""
    try:
        vals = tuple(int(x) for x in str(text).split(","))
    except ValueError:
        raise click.BadParameter(f"horizon must be comma-separated integers, got {text!r}") from None
    if any(v < 1 for v in vals):
        raise click.BadParameter(f"horizon lengths must be >= 1, got {text!r}")
    if len(vals) == 1:
        vals = vals * max(parts)
    if len(vals) not in parts:
        want = " or ".join(map(str, parts))
        raise click.BadParameter(f"horizon needs {want} components, got {text!r}")
    return vals


def parse_g(text: str) -> MistakeFunction:
    try:
        return MistakeFunction.parse(text)
    except InputError as e:
        raise click.BadParameter(str(e)) from None


def _emit(report: Report, out, fmt: str):
    text = report.to_json() if fmt == "json" else report.to_csv()
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    sys.exit(report.exit_code)


def _cache(cache_dir):
    root = cache_dir or default_cache_dir()
    return CountCache(root) if root else None


def common(spec_required=True):
    """--spec, --out, --format, --cache-dir and --threads."""

    def deco(f):
        @click.option("--spec", "spec_path", type=click.Path(dir_okay=False), required=spec_required,
                      help="Shift description document (YAML or JSON).")
        @click.option("--out", type=click.Path(dir_okay=False), help="Write the report here instead of stdout.")
        @click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
        @click.option("--cache-dir", type=click.Path(file_okay=False), help="Count cache (default: $SYMDYN_CACHE_DIR).")
        @click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
        @functools.wraps(f)
        def wrapper(spec_path, out, fmt, cache_dir, threads, **kw):
            spec = load_shift_spec(spec_path) if spec_path else None
            ctx = {"spec": spec, "cache": _cache(cache_dir), "threads": threads}
            report = f(ctx, **kw)
            if spec is not None and report.fingerprint is None:
                report.fingerprint = spec.fingerprint
            _emit(report, out, fmt)

        return wrapper

    return deco


def _report(command, ctx, **params) -> Report:
    spec = ctx.get("spec")
    doc = spec.to_doc() if spec is not None else None
    return Report(command, {"shift": doc, **params})


@click.group()
@click.version_option(__version__, prog_name="symdyn")
def cli():
    """Finite-horizon analysis of subshifts described by documents."""


# ---------------------------------------------------------------- language

@cli.command("enumerate")
@common()
@click.option("--n-min", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--n-max", type=click.IntRange(min=0), required=True)
@click.option("--words/--no-words", default=False, help="List the words themselves (table 'words').")
def enumerate_cmd(ctx, n_min, n_max, words):
    """Language words of lengths n-min..n-max, in canonical order."""
    shift = make_shift(ctx["spec"])
    rep = _report("enumerate", ctx, n_min=n_min, n_max=n_max, words=words)
    rep.horizons = {"n": [n_min, n_max]}
    counts, listing = [], []
    fmt = shift.alphabet.format
    for n in range(n_min, n_max + 1):
        if words:
            lv = enumerate_language(shift, n, threads=ctx["threads"])
            c, p = lv.count, lv.possible
            listing += [{"n": n, "word": fmt(w), "membership": "in"} for w in lv.words]
            listing += [{"n": n, "word": fmt(w), "membership": "unknown"} for w in lv.unknown]
        else:
            res = language_counts(shift, n, cache=ctx["cache"], threads=ctx["threads"])
            c, p = res.counts[n], res.possible[n]
        counts.append({"n": n, "count": c, "possible": p, "approximate": c != p})
    rep.tables["counts"] = counts
    if words:
        rep.tables["words"] = listing
    rep.primary = "words" if words else "counts"
    rep.approximate = any(r["approximate"] for r in counts)
    if rep.approximate:
        rep.status = INCONCLUSIVE
        rep.notes.append("upper approximation: unknown words are counted in 'possible' only")
    return rep


@cli.command()
@common()
@click.option("--n-max", type=click.IntRange(min=1), required=True)
def entropy(ctx, n_max):
    """Per-n entropy estimates with their running infimum."""
    er = entropy_report(ctx["spec"], n_max, cache=ctx["cache"], threads=ctx["threads"])
    rep = _report("entropy", ctx, n_max=n_max)
    rep.horizons = {"n_max": n_max}
    rep.tables["entropy"] = er.csv_rows()
    rep.results = {
        "exact": er.exact,
        "infimum": er.rows[-1][3],
        "method": er.method,
        "subadditivity_violations": [list(v) for v in er.subadditivity_violations],
    }
    rep.approximate = er.approximate
    if er.subadditivity_violations or not all(r["pass"] for r in rep.tables["entropy"]):
        rep.status = FAILS
    elif er.approximate:
        rep.status = INCONCLUSIVE
    return rep


# ------------------------------------------------------------- properties

@cli.command("check-spec")
@common()
@click.option("--tau", type=click.IntRange(min=0), required=True, help="Connector length.")
@click.option("--horizon", default="6,6", show_default=True)
def check_spec(ctx, tau, horizon):
    """Specification with gap tau for word pairs within the horizon."""
    h = parse_horizon(horizon, (2,))
    rep = _report("check-spec", ctx, tau=tau)
    rep.horizons = {"pairs": list(h)}
    rep.add_verdict(check_specification(ctx["spec"], tau, h))
    return rep


def _almost_spec(mode):
    @common()
    @click.option("--g", "g_text", default="1", show_default=True, help="const:m, m, table:a,b,..., sqrt, loglog, log2:c=..,a=..")
    @click.option("--horizon", default="6,6", show_default=True)
    @click.option("--k", type=click.IntRange(min=2), default=3, show_default=True, help="Segments (AS only).")
    def cmd(ctx, g_text, horizon, k):
        g = parse_g(g_text)
        h = parse_horizon(horizon, (2, k) if mode == "AS" else (2,))
        rep = _report(f"check-{mode.lower()}", ctx, g=g.describe(), k=k if mode == "AS" else None)
        v = check_almost_spec(ctx["spec"], g, mode, h, k=k)
        rep.horizons = {"segments": list(v.horizon)}
        rep.add_verdict(v)
        return rep

    cmd.__doc__ = f"{mode}(g) within the horizon."
    return cmd


for _mode in ("AS", "LAS", "RAS"):
    cli.command(f"check-{_mode.lower()}")(_almost_spec(_mode))


@cli.command("min-mistakes")
@common()
@click.option("--w1", required=True, help="Word to be changed.")
@click.option("--w2", required=True, help="Word that must follow.")
@click.option("--g", "g_text", default=None, help="Optional budget; fails when more changes are needed.")
def min_mistakes(ctx, w1, w2, g_text):
    """Fewest changes to w1 so that a language word is followed by w2."""
    shift = make_shift(ctx["spec"])
    a, b = shift.alphabet.parse(w1), shift.alphabet.parse(w2)
    j, v = min_mistakes_left(shift, a, b)
    rep = _report("min-mistakes", ctx, w1=w1, w2=w2, g=g_text)
    finite = j != float("inf")
    rep.results = {"mistakes": j if finite else None, "witness": shift.alphabet.format(v) if finite else None}
    budget = parse_g(g_text)(len(a)) if g_text else None
    if not finite or (budget is not None and j > budget):
        rep.status = FAILS
    return rep


@cli.command()
@common()
@click.option("--horizon", default="6", show_default=True, help="Longest word length checked.")
@click.option("--gap-bound", type=click.IntRange(min=0), default=None, help="Longest connector (default: horizon).")
def irreducible(ctx, horizon, gap_bound):
    """Every pair of words within the horizon joins through a connector."""
    h = parse_horizon(horizon)[0]
    gb = h if gap_bound is None else gap_bound
    rep = _report("irreducible", ctx, gap_bound=gb)
    rep.horizons = {"words": h, "gap": gb}
    rep.add_verdict(check_irreducible(ctx["spec"], h, gb))
    return rep


# -------------------------------------------------------------- structure

def _glue(ctx, H):
    shift = make_shift(ctx["spec"])
    return shift, build_gluing(shift, H)


@cli.command()
@common()
@click.option("--horizon", default="6", show_default=True)
@click.option("--identity-depth", type=click.IntRange(min=0), default=None, help="|x|,|z| bound for the u/u' identity.")
@click.option("--closure-samples", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def glue(ctx, horizon, identity_depth, closure_samples, seed):
    """Build the gluing words u, u', v and check the swap identity."""
    H = parse_horizon(horizon)[0]
    shift, gd = _glue(ctx, H)
    depth = H if identity_depth is None else identity_depth
    rep = _report("glue", ctx, identity_depth=depth, closure_samples=closure_samples, seed=seed)
    rep.horizons = {"gluing": H, "identity": depth}
    rep.results = {**gd.describe(shift), "nested": gd.nested}
    f = shift.alphabet.format
    rep.tables["chain"] = [{"step": k, "w": f(w), "v": f(v), "D": [f(d) for d in D]} for k, (w, v, D) in enumerate(gd.chain)]
    if gd.status != HOLDS:
        rep.status = gd.status
        rep.notes.append(gd.reason)
        return rep
    rep.add_verdict(check_gluing_identity(shift, gd, depth))
    if closure_samples:
        cr = check_closure_conditions(shift, gd, samples=closure_samples, seed=seed)
        rep.results["gcd"] = cr.gcd
        for key in sorted(cr.verdicts):
            rep.add_verdict(cr.verdicts[key])
    return rep


@cli.command()
@common()
@click.option("--horizon", default="6", show_default=True, help="Gluing horizon.")
@click.option("--n-max", type=click.IntRange(min=1), default=12, show_default=True)
@click.option("--word", default=None, help="Classify this word only.")
def decompose(ctx, horizon, n_max, word):
    """Split language words into C^p G C^s pieces and count the obstructions."""
    H = parse_horizon(horizon)[0]
    shift, gd = _glue(ctx, H)
    f = shift.alphabet.format
    rep = _report("decompose", ctx, n_max=n_max, word=word)
    rep.horizons = {"gluing": H, "n_max": n_max}
    rep.results = {"gluing": gd.describe(shift)}
    if gd.status != HOLDS:
        rep.status = gd.status
        rep.notes.append(gd.reason)
        return rep
    if word is not None:
        d = classify_word(shift, gd, shift.alphabet.parse(word))
        rep.results["decomposition"] = {
            "word": f(d.word), "kind": d.kind, "prefix": f(d.prefix), "core": f(d.core),
            "suffix": f(d.suffix), "collections": list(d.collections),
        }
        return rep
    ob = obstruction_entropies(shift, gd, n_max)
    rep.tables["obstructions"] = ob.rows
    rep.results["entropy_estimate"] = ob.entropy_estimate
    rep.results["bbound_ok"] = ob.bbound_ok
    if not ob.bbound_ok:
        rep.status = FAILS
    return rep


@cli.command("measure-center")
@common()
@click.option("--g", "g_text", default="1", show_default=True)
@click.option("--horizon", default="12", show_default=True, help="Search length H for certifying words.")
@click.option("--n-max", type=click.IntRange(min=1), default=6, show_default=True)
def measure_center(ctx, g_text, horizon, n_max):
    """Words surviving g(|w|)+1 disjoint repetitions inside some w of length <= H."""
    g = parse_g(g_text)
    H = parse_horizon(horizon)[0]
    shift = make_shift(ctx["spec"])
    mc = measure_center_approx(shift, g, H, n_max)
    f = shift.alphabet.format
    rep = _report("measure-center", ctx, g=g.describe(), n_max=n_max)
    rep.horizons = {"H": H}
    rep.approximate = True
    rep.results = {"direction": mc.direction}
    rep.notes.append("kept words are certified; flagged words are only unrefuted up to H")
    rep.tables["counts"] = [{"n": n, "kept": k, "flagged": fl} for n, k, fl in mc.counts()]
    rep.tables["kept"] = [
        {"n": n, "word": f(w), "witness": f(mc.witnesses[w]) if w in mc.witnesses else None}
        for n in sorted(mc.kept) for w in mc.kept[n]
    ]
    rep.primary = "kept"
    return rep


# ---------------------------------------------------------------- measures

@cli.command()
@common()
@click.option("--n-max", type=click.IntRange(min=1), required=True, help="Largest period.")
@click.option("--depth", type=click.IntRange(min=1), default=2, show_default=True, help="Cylinder depth for mu_n and TV.")
def periodic(ctx, n_max, depth):
    """Periodic points, periodic-orbit measures and their distance to the Parry measure."""
    shift = make_shift(ctx["spec"])
    parry = None
    if isinstance(shift, SFT):
        try:
            parry = sft_mme(shift).measure
        except ReducibleError:
            parry = None
    rows, cyl = [], []
    exact = True
    f = shift.alphabet.format
    for n in range(1, n_max + 1):
        pts = periodic_points(shift, n)
        exact = exact and pts.exact
        row = {"n": n, "points": pts.count, "exact": pts.exact, "tv_parry": None}
        if pts.count:
            mu = periodic_orbit_measure(shift, n)
            if parry is not None:
                row["tv_parry"] = tv_distance(mu, parry, depth)
            if n == n_max:
                cyl = [{"word": f(w), "mu": mu(w)} for w in shift.alphabet.all_words(depth)]
        rows.append(row)
    rep = _report("periodic", ctx, n_max=n_max, depth=depth)
    rep.horizons = {"n_max": n_max, "depth": depth}
    rep.tables["periodic"] = rows
    rep.tables["cylinders"] = cyl
    rep.primary = "periodic"
    if not exact:
        rep.status, rep.approximate = INCONCLUSIVE, True
        rep.notes.append("periodicity checked to a finite depth")
    return rep


@cli.command()
@common()
@click.option("--depth", type=click.IntRange(min=1), default=2, show_default=True)
def mme(ctx, depth):
    """Parry measure of an irreducible SFT."""
    shift = make_shift(ctx["spec"])
    if not isinstance(shift, SFT):
        raise InputError("mme needs an SFT (family full or sft)")
    pd = sft_mme(shift)
    f = shift.alphabet.format
    rep = _report("mme", ctx, depth=depth)
    rep.horizons = {"depth": depth}
    rep.results = {"perron_value": pd.transfer.perron.value, "markov_entropy": pd.entropy, "ln_lambda": exact_entropy(shift)}
    rep.tables["cylinders"] = [{"word": f(w), "mu": pd.measure(w)} for w in shift.alphabet.all_words(depth)]
    return rep


@cli.command("audit-bounds")
@common()
@click.option("--m", type=click.IntRange(min=0), required=True, help="Constant mistake budget.")
@click.option("--n-max", type=click.IntRange(min=1), required=True)
@click.option("--h", type=float, default=None, help="Entropy (default: exact SFT value or running infimum).")
@click.option("--word", default=None, help="Suffix word for the lower-bound constant.")
def audit_bounds(ctx, m, n_max, h, word):
    """|L_n| <= |A|^{2m} n^{2m} e^{nh}, plus the fitted suffix-count constant."""
    shift = make_shift(ctx["spec"])
    w = shift.alphabet.parse(word) if word else None
    au = bound_audit(shift, m, h, n_max, w=w)
    rep = _report("audit-bounds", ctx, m=m, n_max=n_max, h=h, word=word)
    rep.horizons = {"n_max": n_max}
    rep.tables["bounds"] = au.rows
    if au.epsilon_rows:
        rep.tables["suffix"] = au.epsilon_rows
    rep.primary = "bounds"
    rep.results = {"h": au.h, "h_exact": au.h_exact, "violations": au.violations, "epsilon": au.epsilon}
    rep.approximate = not au.h_exact
    if not au.passed:
        rep.status = FAILS
    return rep


# ----------------------------------------------------------- counterexample

@cli.group()
def counterexample():
    """The signed-alphabet coded shift with double-log RAS."""


def _ce_options(f):
    f = click.option("--N", "N", type=click.IntRange(min=1), default=4, show_default=True)(f)
    f = click.option("--radius", type=click.IntRange(min=0), default=2, show_default=True)(f)
    f = click.option("--seed", type=int, default=0, show_default=True)(f)
    return f


def _ce_shift(ctx, N, radius, seed, n_max):
    spec = ctx["spec"]
    if spec is None:
        spec = ce.CounterexampleSpec(N, radius, seed)
        ctx["spec"] = spec
    if not isinstance(spec, ce.CounterexampleSpec):
        raise InputError("the shift document must have family 'counterexample'")
    shift = make_shift(spec)
    for a, b in ce._blocks_upto(max(n_max, 1)):
        shift.U(b - a)
    return shift


@counterexample.command("build")
@common(spec_required=False)
@_ce_options
@click.option("--n-max", type=click.IntRange(min=1), default=8, show_default=True)
def ce_build(ctx, N, radius, seed, n_max):
    """Materialize spanning sets and count generators and language words."""
    shift = _ce_shift(ctx, N, radius, seed, n_max)
    counts = language_counts(shift, n_max, cache=ctx["cache"]).counts
    rep = _report("counterexample build", ctx, n_max=n_max)
    rep.fingerprint = ctx["spec"].fingerprint
    rep.horizons = {"n_max": n_max}
    rep.tables["counts"] = [
        {"n": n, "language": counts[n], "t_plus": shift.t_count(n)} for n in range(1, n_max + 1)
    ]
    rep.notes.append(ce.ROOM_NOTE)
    return rep


@counterexample.command("audit")
@common(spec_required=False)
@_ce_options
@click.option("--n-max", type=click.IntRange(min=1), default=8, show_default=True)
def ce_audit(ctx, N, radius, seed, n_max):
    """Counting inequalities with achieved spanning-set sizes."""
    shift = _ce_shift(ctx, N, radius, seed, n_max)
    au = ce.audit_counterexample(shift, n_max)
    head, *body = list(au.csv_rows())
    rep = _report("counterexample audit", ctx, n_max=n_max)
    rep.fingerprint = ctx["spec"].fingerprint
    rep.horizons = {"n_max": n_max}
    rep.tables["audit"] = [dict(zip(head, r)) for r in body]
    rep.tables["rows"] = au.rows
    rep.primary = "audit"
    rep.results = {
        "alpha_sum": au.alpha_sum,
        "alpha_below_one": au.alpha_ok,
        "prefix_closed": au.prefix_closed,
        "sign_symmetric": au.sign_symmetric,
        "bound0_ok": au.bound0_ok,
        "spanning_ok": au.spanning_ok,
        "embeddings_ok": au.embeddings_ok,
        "entropy": [list(e) for e in au.entropy],
    }
    rep.notes.append(au.note)
    if not (au.prefix_closed and au.bound0_ok and au.spanning_ok and au.embeddings_ok):
        rep.status = FAILS
    return rep


@counterexample.command("ras")
@common(spec_required=False)
@_ce_options
@click.option("--horizon", default="6,6", show_default=True)
def ce_ras(ctx, N, radius, seed, horizon):
    """RAS with g(n) = 1 + 2 floor(log2 log2 n)."""
    h = parse_horizon(horizon, (2,))
    shift = _ce_shift(ctx, N, radius, seed, max(h))
    rep = _report("counterexample ras", ctx)
    rep.fingerprint = ctx["spec"].fingerprint
    rep.horizons = {"segments": list(h)}
    rep.add_verdict(ce.check_ras_loglog(shift, h))
    rep.notes.append(ce.ROOM_NOTE)
    return rep


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="symdyn", standalone_mode=False)
    except click.exceptions.Exit as e:
        sys.exit(e.exit_code)
    except click.Abort:
        click.echo("aborted", err=True)
        sys.exit(EXIT_INPUT)
    except click.ClickException as e:
        e.show()
        sys.exit(EXIT_INPUT)
    except (BudgetExceededError, InsufficientDepthError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_LIMIT)
    except SymdynError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_INPUT)
    sys.exit(0)


if __name__ == "__main__":
    main()
