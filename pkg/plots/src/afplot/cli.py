"""Render figures from the solver's CSV artifacts.

Pure CSV-to-image transforms: nothing here recomputes physics.  Each plot
kind validates the column schema of its input and exits with a column diff
when it does not match.

    afplot plot convergence --in gaussian2d_convergence.csv --out conv.png
    afplot plot divergence  --in vortex2d_timeseries.csv    --out div.png
    afplot plot moduli      --in advect1d_moduli.csv        --out mod.png
    afplot plot heatmap     --in gaussian2d_snapshot.csv    --out heat.png
    afplot plot scatter     --in gaussian2d_snapshot.csv    --out scat.png
"""

import argparse
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import __version__

DPI = 120
FIGSIZE = (6.0, 4.5)


class SchemaError(Exception):
    pass


def _read_csv(path):
    """Read a delimited file; returns (header list, list of row lists of
    strings).  Lines starting with '#' are collected separately."""
    comments = []
    rows = []
    header = None
    with open(path) as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                comments.append(line)
                continue
            parts = line.split(",")
            if header is None:
                header = parts
            else:
                rows.append(parts)
    if header is None:
        raise SchemaError(f"{path}: empty file, no header row")
    return comments, header, rows


def _check_schema(path, header, required, prefix_groups=()):
    """Require the named columns (and at least one column per prefix group);
    report the difference otherwise."""
    missing = [c for c in required if c not in header]
    for prefix in prefix_groups:
        if not any(c.startswith(prefix) for c in header):
            missing.append(prefix + "*")
    if missing:
        raise SchemaError(
            f"{path}: column schema mismatch\n"
            f"  expected: {', '.join(list(required) + [p + '*' for p in prefix_groups])}\n"
            f"  found:    {', '.join(header)}\n"
            f"  missing:  {', '.join(missing)}")


def _columns(header, rows, names):
    idx = [header.index(n) for n in names]
    out = np.empty((len(rows), len(names)))
    for r, row in enumerate(rows):
        for c, i in enumerate(idx):
            out[r, c] = float(row[i])
    return out


def _save(fig, out):
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    print(f"wrote {out}")


# ---------------------------------------------------------------------------
# plot kinds

def plot_convergence(args):
    """Log-log error-vs-spacing curves with a third-order guide line."""
    _, header, rows = _read_csv(args.infile)
    _check_schema(args.infile, header, ["n", "h"], prefix_groups=("l1_",))
    err_cols = [c for c in header if c.startswith("l1_")]
    data = _columns(header, rows, ["h"] + err_cols)
    h = data[:, 0]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for k, name in enumerate(err_cols):
        vals = data[:, 1 + k]
        keep = vals > 0
        ax.loglog(h[keep], vals[keep], "o-", label=name)
    # slope-3 guide anchored at the finest available point
    ref = next((data[:, 1 + k] for k in range(len(err_cols))
                if (data[:, 1 + k] > 0).any()), None)
    if ref is not None and len(h) > 1:
        i = int(np.argmin(h))
        guide = ref[i] * (h / h[i]) ** 3
        ax.loglog(h, guide, "k--", label="slope 3")
    ax.set_xlabel("grid spacing h")
    ax.set_ylabel("L1 error")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    _save(fig, args.out)


def plot_divergence(args):
    """Time traces of the discrete divergences on symmetric-log axes."""
    _, header, rows = _read_csv(args.infile)
    div_cols = [f"div{i}" for i in range(1, 8)] + ["div_control"]
    _check_schema(args.infile, header, ["t"] + div_cols)
    data = _columns(header, rows, ["t"] + div_cols)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for k, name in enumerate(div_cols):
        style = "k--" if name == "div_control" else "-"
        ax.plot(data[:, 0], data[:, 1 + k], style, label=name)
    ax.set_yscale("symlog", linthresh=1e-16)
    ax.set_xlabel("t")
    ax.set_ylabel("discrete divergence (max norm)")
    ax.legend(ncol=2, fontsize=8)
    ax.grid(True, alpha=0.3)
    _save(fig, args.out)


def plot_moduli(args):
    """One eigenvalue-modulus curve per index over the wavenumber ray."""
    _, header, rows = _read_csv(args.infile)
    _check_schema(args.infile, header, ["s", "phi", "dt", "idx", "modulus"])
    data = _columns(header, rows, ["s", "idx", "modulus"])
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for idx in sorted(set(data[:, 1].astype(int))):
        sel = data[:, 1] == idx
        order = np.argsort(data[sel, 0])
        ax.plot(data[sel, 0][order], data[sel, 2][order],
                label=f"eigenvalue {idx}")
    ax.axhline(1.0, color="k", lw=0.5, alpha=0.5)
    ax.set_xlim(-np.pi, np.pi)
    ax.set_xlabel("wavenumber s along the ray")
    ax.set_ylabel("amplification modulus")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    _save(fig, args.out)


def _load_snapshot(path):
    comments, header, rows = _read_csv(path)
    _check_schema(path, header, ["kind", "x", "y"])
    var_cols = [c for c in header
                if c not in ("kind",) and c not in tuple("ijk")
                and c not in tuple("xyz")]
    if not var_cols:
        raise SchemaError(f"{path}: column schema mismatch\n"
                          f"  found:   {', '.join(header)}\n"
                          f"  missing: at least one variable column")
    kind_col = header.index("kind")
    kinds = np.array([row[kind_col] for row in rows])
    coords = _columns(header, rows, [a for a in "xyz" if a in header])
    vals = _columns(header, rows, var_cols)
    return kinds, coords, var_cols, vals


def plot_heatmap(args):
    """Scattered-color map of one variable over the dof positions."""
    kinds, coords, var_cols, vals = _load_snapshot(args.infile)
    var = args.var or var_cols[-1]
    if var not in var_cols:
        raise SchemaError(f"{args.infile}: no column {var!r}; "
                          f"have {', '.join(var_cols)}")
    sel = kinds == args.kind if args.kind else np.ones(len(kinds), bool)
    if not sel.any():
        raise SchemaError(f"{args.infile}: no rows of kind {args.kind!r}")
    v = vals[sel, var_cols.index(var)]
    fig, ax = plt.subplots(figsize=(5.4, 4.8))
    sc = ax.scatter(coords[sel, 0], coords[sel, 1], c=v, s=6, marker="s",
                    cmap="viridis")
    fig.colorbar(sc, ax=ax, label=var)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal")
    _save(fig, args.out)


def plot_scatter(args):
    """Radial scatter of one variable about the domain center, optionally
    overlaid with a reference curve (CSV with columns r,<var>)."""
    kinds, coords, var_cols, vals = _load_snapshot(args.infile)
    var = args.var or var_cols[-1]
    if var not in var_cols:
        raise SchemaError(f"{args.infile}: no column {var!r}; "
                          f"have {', '.join(var_cols)}")
    if args.center:
        center = np.array([float(c) for c in args.center.split(",")])
    else:
        center = 0.5 * (coords.min(axis=0) + coords.max(axis=0))
    r = np.linalg.norm(coords - center, axis=1)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(r, vals[:, var_cols.index(var)], ".", ms=2, alpha=0.5,
            label=var)
    if args.infile2:
        _, h2, rows2 = _read_csv(args.infile2)
        _check_schema(args.infile2, h2, ["r"])
        ycol = var if var in h2 else h2[-1]
        ref = _columns(h2, rows2, ["r", ycol])
        order = np.argsort(ref[:, 0])
        ax.plot(ref[order, 0], ref[order, 1], "k-", lw=1, label="reference")
    ax.set_xlabel("radius")
    ax.set_ylabel(var)
    ax.legend()
    ax.grid(True, alpha=0.3)
    _save(fig, args.out)


KINDS = {
    "convergence": plot_convergence,
    "divergence": plot_divergence,
    "moduli": plot_moduli,
    "heatmap": plot_heatmap,
    "scatter": plot_scatter,
}


def build_parser():
    p = argparse.ArgumentParser(prog="afplot",
                                description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    pp = sub.add_parser("plot", help="render one figure from CSV input")
    pp.add_argument("plot_kind", metavar="kind", choices=sorted(KINDS))
    pp.add_argument("--in", dest="infile", required=True,
                    help="input CSV produced by the solver CLI")
    pp.add_argument("--in2", dest="infile2",
                    help="optional second CSV (scatter reference curve)")
    pp.add_argument("--out", required=True, help="output image path")
    pp.add_argument("--var", help="variable column (snapshot kinds)")
    pp.add_argument("--center",
                    help="scatter center as comma-separated coordinates "
                         "(default: domain midpoint)")
    pp.add_argument("--kind", dest="kind_filter",
                    help="dof kind filter for heatmaps (e.g. N)")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    args.kind = getattr(args, "kind_filter", None)
    try:
        KINDS[args.plot_kind](args)
    except SchemaError as e:
        print(str(e), file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(str(e), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
