"""Command-line entry point.

Subcommands: verify, classify, dualize, tower, sectors, example, roundtrip.
Exit codes: 0 ok, 1 property failure, 2 input error.  With --machine the
report is line-oriented ``key value`` text with stable keys, byte-identical
for a fixed seed.
"""

from __future__ import annotations

import os
import sys

import click
import numpy as np

from . import fileio, figures, sectors as sec
from .algebra import AlgebraError, MultiMatrixAlgebra
from .duality import dualize, double_dual_check
from .hopf import classify, full_verify, group_algebra, function_algebra, \
    groupoid_algebra, cyclic_group_table, symmetric_group_table, Groupoid
from .towers import depth, extract_weak_hopf, index as tower_index, \
    make_inclusion


def _fmt_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt_value(x) for x in v) if len(v) else "-"
    return str(v)


class Reporter:
    def __init__(self, machine):
        self.machine = machine

    def kv(self, key, value):
        if self.machine:
            click.echo(f"{key} {_fmt_value(value)}")
        else:
            click.echo(f"  {key}: {_fmt_value(value)}")

    def line(self, text):
        if not self.machine:
            click.echo(text)


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


def _parse(loader, text):
    try:
        return loader(text)
    except (fileio.ParseError, AlgebraError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


@click.group()
@click.option("--tol", type=float, default=1e-9, show_default=True,
              help="numerical tolerance for the verifier suite")
@click.option("--seed", type=int, default=0, show_default=True,
              help="seed for randomized matrix-unit splitting")
@click.option("--machine", is_flag=True, help="line-oriented key-value output")
@click.pass_context
def main(ctx, tol, seed, machine):
    """Weak C* Hopf algebra toolkit: verification, duality, towers, sectors."""
    if not 0 < tol <= 1e-3:
        click.echo("error: --tol must lie in (0, 1e-3]", err=True)
        sys.exit(2)
    ctx.obj = {"tol": tol, "seed": seed, "rep": Reporter(machine)}


def _run_verifiers(W, rep, tol):
    checks = full_verify(W, tol=tol)
    for c in checks:
        rep.kv(f"check.{c.name.replace(' ', '_')}",
               ["pass" if c.passed else "FAIL", float(c.residual)])
    report = classify(W, tol=tol)
    rep.kv("verdict", report.verdict)
    rep.kv("true_axioms", list(report.true_axioms))
    return all(c.passed for c in checks) and report.verdict != "Invalid"


@main.command()
@click.argument("path", type=click.Path())
@click.pass_obj
def verify(obj, path):
    """Run the full weak Hopf verifier suite on a .whopf file."""
    W, name = _parse(fileio.load_whopf, _read(path))
    rep = obj["rep"]
    rep.line(f"verifying {name} (dim {W.algebra.dim})")
    ok = _run_verifiers(W, rep, obj["tol"])
    sys.exit(0 if ok else 1)


@main.command(name="classify")
@click.argument("path", type=click.Path())
@click.pass_obj
def classify_cmd(obj, path):
    """Classify a .whopf file as True / Weak / Invalid."""
    W, name = _parse(fileio.load_whopf, _read(path))
    rep = obj["rep"]
    report = classify(W, tol=obj["tol"])
    rep.kv("name", name)
    rep.kv("dim", W.algebra.dim)
    rep.kv("blocks", list(W.algebra.block_sizes))
    rep.kv("verdict", report.verdict)
    rep.kv("weak_axioms", list(report.weak_axioms))
    rep.kv("true_axioms", list(report.true_axioms))
    sys.exit(0 if report.verdict != "Invalid" else 1)


@main.command(name="dualize")
@click.argument("path", type=click.Path())
@click.option("-o", "--out", type=click.Path(), default=None,
              help="output .whopf path (default: <input>.dual.whopf)")
@click.pass_obj
def dualize_cmd(obj, path, out):
    """Write the dual weak Hopf algebra and its pairing matrix."""
    W, name = _parse(fileio.load_whopf, _read(path))
    rep = obj["rep"]
    rng = np.random.default_rng(obj["seed"])
    try:
        pair = dualize(W, rng=rng)
    except AlgebraError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    out = out or os.path.splitext(path)[0] + ".dual.whopf"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(fileio.dump_whopf(pair.dual, name + "_dual"))
    with open(out + ".pairing", "w", encoding="utf-8") as fh:
        fh.write(fileio.dump_pairing(pair.pairing, name))
    dd_ok, dd_res, _ = double_dual_check(W, rng=np.random.default_rng(obj["seed"]))
    rep.kv("primal_blocks", list(W.algebra.block_sizes))
    rep.kv("dual_blocks", list(pair.dual.algebra.block_sizes))
    rep.kv("dual_verdict", classify(pair.dual, tol=obj["tol"]).verdict)
    rep.kv("pairing_condition", float(pair.condition_number))
    rep.kv("double_dual", ["pass" if dd_ok else "FAIL", float(dd_res)])
    rep.kv("written", out)
    sys.exit(0 if dd_ok else 1)


@main.command(name="tower")
@click.argument("path", type=click.Path())
@click.option("--extract", "do_extract", is_flag=True,
              help="run the depth-2 weak Hopf extraction")
@click.option("--figures", "fig_dir", type=click.Path(), default=None,
              help="directory for rendered Bratteli diagrams")
@click.option("-o", "--out", type=click.Path(), default=None,
              help="basename for extracted Q / Q-hat .whopf files")
@click.pass_obj
def tower_cmd(obj, path, do_extract, fig_dir, out):
    """Index, depth and (optionally) weak Hopf extraction for an inclusion."""
    inc, name = _parse(fileio.load_inclusion, _read(path))
    rep = obj["rep"]
    lam = tower_index(inc)
    dep = depth(inc)
    rep.kv("name", name)
    rep.kv("blocks_a", list(inc.A.block_sizes))
    rep.kv("blocks_b", list(inc.B.block_sizes))
    rep.kv("inclusion_matrix", [int(x) for x in np.asarray(inc.Lam).ravel()])
    rep.kv("index", float(lam))
    rep.kv("depth", dep)
    if fig_dir:
        os.makedirs(fig_dir, exist_ok=True)
        fig = figures.bratteli_figure(
            np.asarray(inc.Lam, dtype=float),
            os.path.join(fig_dir, f"{name}_bratteli.png"),
            depth_val=dep, index_val=float(lam))
        rep.kv("figure", fig)
    if not do_extract:
        sys.exit(0)
    try:
        res = extract_weak_hopf(inc, rng=np.random.default_rng(obj["seed"]))
    except AlgebraError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    rep.kv("dim_q", res.Q.algebra.dim)
    rep.kv("dim_qhat", res.Qhat.algebra.dim)
    rep.kv("q_blocks", list(res.Q.algebra.block_sizes))
    rep.kv("qhat_blocks", list(res.Qhat.algebra.block_sizes))
    ok = _run_verifiers(res.Q, rep, obj["tol"])
    for row in res.sector_table:
        rep.kv(f"sector.{row.label}", [row.n, float(row.d), float(row.z)])
    rep.kv("dressing", res.dressing_note)
    base = out or os.path.splitext(path)[0]
    for suffix, W in (("q", res.Q), ("qhat", res.Qhat)):
        target = f"{base}.{suffix}.whopf"
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(fileio.dump_whopf(W, f"{name}_{suffix}"))
        rep.kv(f"written_{suffix}", target)
    sys.exit(0 if ok else 1)


@main.command(name="sectors")
@click.argument("path", type=click.Path())
@click.option("--sigma", "sigma_kind", default="oplus", show_default=True,
              help="'oplus', 'reg', or comma-separated multiplicities")
@click.option("--figures", "fig_dir", type=click.Path(), default=None,
              help="directory for rendered dimension charts")
@click.option("--locality", is_flag=True,
              help="request braiding/statistics information")
@click.pass_obj
def sectors_cmd(obj, path, sigma_kind, fig_dir, locality):
    """Sector calculus (dimensions, dim Q, z-weights, depth-2) for a .fr file."""
    fr, name = _parse(fileio.load_fusion_ring, _read(path))
    rep = obj["rep"]
    checks = sec.verify_fusion(fr)
    if not all(c.passed for c in checks):
        for c in checks:
            if not c.passed:
                click.echo(f"error: fusion axiom failed: {c.name}", err=True)
        sys.exit(1)
    try:
        if sigma_kind == "oplus":
            data = sec.sigma_oplus(fr)
        elif sigma_kind == "reg":
            data = sec.sigma_reg(fr)
        else:
            m = np.array([int(t) for t in sigma_kind.split(",")], dtype=np.int64)
            if m.shape != (fr.size,) or (m < 0).any():
                raise ValueError(f"sigma wants {fr.size} nonnegative integers")
            data = sec._sector_data(fr, m)
    except (AlgebraError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2 if isinstance(exc, ValueError) else 1)
    rep.kv("name", name)
    for key, value in sec.report(fr, data).items():
        rep.kv(key, value)
    if locality:
        rep.kv("locality_notice", sec.LOCALITY_NOTICE)
    if fig_dir:
        os.makedirs(fig_dir, exist_ok=True)
        fig = figures.sector_figure(
            fr.labels, data.dims, data.n,
            os.path.join(fig_dir, f"{name}_sectors.png"),
            title=f"{name}: sector data")
        rep.kv("figure", fig)
    sys.exit(0)


def _example_group_z2():
    return fileio.dump_whopf(group_algebra(cyclic_group_table(2)), "group_z2")


def _example_group_z3():
    return fileio.dump_whopf(group_algebra(cyclic_group_table(3)), "group_z3")


def _example_group_s3():
    return fileio.dump_whopf(group_algebra(symmetric_group_table(3)), "group_s3")


def _example_function_z2():
    return fileio.dump_whopf(function_algebra(cyclic_group_table(2)), "function_z2")


def _example_groupoid_pair2():
    return fileio.dump_whopf(groupoid_algebra(Groupoid.pair(2)), "groupoid_pair2")


def _example_groupoid_pair3():
    return fileio.dump_whopf(groupoid_algebra(Groupoid.pair(3)), "groupoid_pair3")


def _example_c2_in_mat2():
    emb = np.zeros((4, 2))
    emb[0, 0] = 1.0
    emb[3, 1] = 1.0
    inc = make_inclusion(MultiMatrixAlgebra((1, 1)), MultiMatrixAlgebra((2,)), emb)
    return fileio.dump_inclusion(inc, "c2_in_mat2")


EXAMPLES = {
    "group_z2": (_example_group_z2, ".whopf"),
    "group_z3": (_example_group_z3, ".whopf"),
    "group_s3": (_example_group_s3, ".whopf"),
    "function_z2": (_example_function_z2, ".whopf"),
    "groupoid_pair2": (_example_groupoid_pair2, ".whopf"),
    "groupoid_pair3": (_example_groupoid_pair3, ".whopf"),
    "c2_in_mat2": (_example_c2_in_mat2, ".incl"),
    "fibonacci": (lambda: fileio.dump_fusion_ring(sec.fibonacci_ring(), "fibonacci"), ".fr"),
    "ising": (lambda: fileio.dump_fusion_ring(sec.ising_ring(), "ising"), ".fr"),
    "z2_ring": (lambda: fileio.dump_fusion_ring(sec.cyclic_ring(2), "z2_ring"), ".fr"),
    "z3_ring": (lambda: fileio.dump_fusion_ring(sec.cyclic_ring(3), "z3_ring"), ".fr"),
}


@main.command(name="example")
@click.argument("name", type=click.Choice(sorted(EXAMPLES) + ["all"]))
@click.option("-d", "--directory", type=click.Path(), default=".",
              show_default=True)
@click.pass_obj
def example_cmd(obj, name, directory):
    """Materialize a stock example file (or 'all' of them)."""
    os.makedirs(directory, exist_ok=True)
    names = sorted(EXAMPLES) if name == "all" else [name]
    for n in names:
        maker, ext = EXAMPLES[n]
        target = os.path.join(directory, n + ext)
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(maker())
        obj["rep"].kv("written", target)
    sys.exit(0)


@main.command(name="roundtrip")
@click.argument("paths", type=click.Path(), nargs=-1, required=True)
@click.pass_obj
def roundtrip_cmd(obj, paths):
    """Check that parse -> serialize -> parse is the identity."""
    rep = obj["rep"]
    ok = True
    for path in paths:
        try:
            good = fileio.round_trip(path)
        except (fileio.ParseError, OSError, AlgebraError) as exc:
            click.echo(f"error: {path}: {exc}", err=True)
            sys.exit(2)
        rep.kv(os.path.basename(path), "pass" if good else "FAIL")
        ok = ok and good
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
