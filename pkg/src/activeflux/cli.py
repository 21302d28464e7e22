"""Command-line front end: runs, spectral analyses, convergence studies.

All artifacts are delimited text with 17-significant-digit numbers so that
downstream plotting and regression baselines round-trip exactly.  Exit codes:
0 success, 2 usage error, 3 numerical failure (NaN/Inf detected).
"""

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__
from .basis import format_stencils
from .cases import (CASES, discrete_divergences, init_case, l1_error,
                    radial_reference_state)
from .grid import total_average, write_snapshot
from .scheme import SPLITTINGS, Acoustics, Advection, advance
from .spectral import (amplification, assemble_E, det_closed_form_neg1, det_E,
                       eigen_moduli, kernel_dim, max_stable_dt,
                       translation_factors, write_kernel_csv,
                       write_moduli_csv, write_stability_csv)

PROBLEMS = {
    "advect1d": lambda: (Advection((1.0,)), (1.0,)),
    "acoustics2d": lambda: (Acoustics(2), (1.0, 1.0)),
    "acoustics3d": lambda: (Acoustics(3), (1.0, 1.0, 1.0)),
}


def stencil_hash():
    """Content hash of the derivative stencil tables of all dimensions."""
    blob = "\n".join(format_stencils(d) for d in (1, 2, 3)).encode()
    return hashlib.sha256(blob).hexdigest()


def _fmt(x):
    return f"{x:.17g}"


def _load_config(path):
    cfg = {}
    with open(path) as f:
        for line in f:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            cfg[key.strip().replace("-", "_")] = val.strip()
    return cfg


def _apply_config(args, argv):
    """Config file supplies defaults; explicit flags win."""
    if not getattr(args, "config", None):
        return args
    cfg = _load_config(args.config)
    given = {a.lstrip("-").replace("-", "_").split("=")[0]
             for a in argv if a.startswith("--")}
    for key, val in cfg.items():
        if key in given or not hasattr(args, key):
            continue
        cur = getattr(args, key)
        if isinstance(cur, bool):
            val = val.lower() in ("1", "true", "yes")
        elif cur is not None and isinstance(cur, int):
            val = int(val)
        elif cur is not None and isinstance(cur, float):
            val = float(val)
        else:
            for cast in (int, float):
                try:
                    val = cast(val)
                    break
                except ValueError:
                    pass
        setattr(args, key, val)
    return args


def _grid_sizes(args, dim):
    if args.nx or args.ny or args.nz:
        per_axis = (args.nx, args.ny, args.nz)[:dim]
        if any(v is None for v in per_axis):
            raise SystemExit2("give all of --nx/--ny(/--nz) or use --n")
        return tuple(per_axis)
    n = args.n if args.n is not None else CASES[args.case].default_n
    return (int(n),) * dim


class SystemExit2(SystemExit):
    def __init__(self, msg):
        print(f"error: {msg}", file=sys.stderr)
        super().__init__(2)


def _time_stepping(args, spec, grid):
    if args.dt is not None and args.cfl is not None:
        raise SystemExit2("give exactly one of --cfl and --dt")
    model = spec.model()
    speed = max(model.max_speed(a) for a in range(model.dim))
    if args.dt is not None:
        dt = args.dt
    else:
        cfl = args.cfl if args.cfl is not None else spec.default_cfl
        dt = cfl * min(grid.h) / speed
    if args.steps is not None:
        return dt, int(args.steps)
    t_end = args.t_end if args.t_end is not None else spec.default_t_end
    steps = max(1, int(np.ceil(t_end / dt - 1e-12)))
    return t_end / steps, steps


def cmd_run(args, argv):
    if args.case not in CASES:
        raise SystemExit2(f"unknown case {args.case!r}; choose from "
                          + ", ".join(sorted(CASES)))
    spec = CASES[args.case]
    grid = spec.make_grid(_grid_sizes(args, spec.dim), args.boundary)
    model = spec.model()
    dt, steps = _time_stepping(args, spec, grid)
    state0 = init_case(args.case, grid)
    every = args.every if args.every else max(1, steps // 200)
    os.makedirs(args.out, exist_ok=True)

    var_names = list(model.var_names)
    div_names = [f"div{i}" for i in range(1, 8)] + ["div_control"]
    rows = []
    failed = [False]

    def record(t, st):
        l1 = l1_error(st, state0, "A")
        if spec.dim == 2:
            dv = discrete_divergences(st)
            divs = [dv[f"div{i}"] for i in range(1, 8)] + [dv["control"]]
        else:
            divs = [float("nan")] * 8
        mass = total_average(st)
        rows.append([t] + list(l1) + divs + list(mass))

    record(0.0, state0)

    def callback(k, t, st):
        if not np.isfinite(st.data).all():
            failed[0] = True
            return True
        if k % every == 0 or k == steps:
            record(t, st)
        return False

    final = advance(state0, model, dt, steps, args.splitting,
                    callback=callback)

    base = os.path.join(args.out, args.case)
    header = (["t"] + [f"l1_{v}" for v in var_names] + div_names
              + [f"mass_{v}" for v in var_names])
    with open(base + "_timeseries.csv", "w") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(x) for x in row) + "\n")
    write_snapshot(base + "_snapshot.csv", final, var_names)
    manifest = {
        "command": "run",
        "case": args.case,
        "n": list(grid.n),
        "h": list(grid.h),
        "boundary": grid.boundary,
        "splitting": args.splitting,
        "dt": dt,
        "steps": steps,
        "t_final": final.time,
        "seed": args.seed,
        "every": every,
        "version": __version__,
        "stencil_hash": stencil_hash(),
    }
    with open(base + "_manifest.json", "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    if args.figures:
        _render_run_figure(base, header, rows, spec.dim)
    if failed[0]:
        print("numerical failure: non-finite values detected",
              file=sys.stderr)
        return 3
    print(f"wrote {base}_timeseries.csv, {base}_snapshot.csv, "
          f"{base}_manifest.json")
    return 0


def _render_run_figure(base, header, rows, dim):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = np.array(rows)
    t = data[:, 0]
    fig, ax = plt.subplots(figsize=(7, 5))
    if dim == 2 and np.isfinite(data[:, header.index("div1")]).all():
        for name in [f"div{i}" for i in range(1, 8)] + ["div_control"]:
            ax.plot(t, np.maximum(data[:, header.index(name)], 1e-300),
                    label=name)
        ax.set_yscale("log")
        ax.set_ylabel("max-norm of divergence stencil")
    else:
        for j, name in enumerate(header):
            if name.startswith("l1_"):
                ax.plot(t, data[:, j], label=name)
        ax.set_ylabel("deviation from initial data")
    ax.set_xlabel("t")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(base + "_timeseries.png", dpi=150)
    plt.close(fig)


def cmd_analyze(args, argv):
    if args.what == "detcheck":
        model = Acoustics(2)
        h = (1.0, 1.0)
        E = assemble_E(model, h, (-1.0 + 0j, -1.0 + 0j), "rusanov")
        det = det_E(E)
        ref = det_closed_form_neg1(model.c, *h)
        rel = abs(det - ref) / abs(ref)
        print(f"det(E) at t=(-1,-1): {det.real:.17g}")
        print(f"closed form:         {ref:.17g}")
        print(f"relative difference: {rel:.3e}")
        return 0 if rel <= 1e-9 else 1

    if args.problem not in PROBLEMS:
        raise SystemExit2(f"unknown problem {args.problem!r}; choose from "
                          + ", ".join(sorted(PROBLEMS)))
    model, h = PROBLEMS[args.problem]()
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, f"{args.problem}_{args.what}")

    if args.what == "stability":
        rows = []
        splits = [args.splitting] if args.splitting_given else SPLITTINGS
        for split in splits:
            dtmax = max_stable_dt(model, h, split, samples=args.samples)
            rows.append((args.problem, split, dtmax))
            print(f"{args.problem} {split}: max stable dt = {dtmax:.6g} "
                  f"(CFL {dtmax * max(model.max_speed(a) for a in range(model.dim)) / min(h):.6g})")
        write_stability_csv(base + ".csv", rows)
        print(f"wrote {base}.csv")
        return 0

    if args.what == "kernel":
        rng = np.random.default_rng(args.seed)
        rows = []
        dims = set()
        for _ in range(args.samples):
            beta = rng.uniform(-np.pi, np.pi, model.dim)
            t = tuple(np.exp(1j * beta))
            E = assemble_E(model, h, t, args.splitting)
            d = kernel_dim(E)
            dims.add(d)
            rows.append((t, d))
        write_kernel_csv(base + ".csv", rows, model.dim)
        print(f"kernel dimension over {args.samples} generic wavevectors: "
              + ", ".join(str(d) for d in sorted(dims)))
        print(f"wrote {base}.csv")
        return 0

    if args.what == "moduli":
        dt = args.dt if args.dt is not None else 0.0
        phi = args.phi
        direction = np.array([np.cos(phi), np.sin(phi), 0.0])[:model.dim]
        if model.dim == 1:
            direction = np.array([1.0])
        rows = []
        svals = np.linspace(-np.pi, np.pi, max(args.samples, 8))
        for s in svals:
            beta = s * direction
            t = tuple(np.exp(1j * beta))
            E = assemble_E(model, h, t, args.splitting)
            if dt > 0:
                mods = eigen_moduli(amplification(E, dt))
            else:
                mods = [1.0] * E.shape[0]
            for idx, mod in enumerate(mods):
                rows.append((s, phi, dt, idx, mod))
        write_moduli_csv(base + ".csv", rows)
        if args.figures:
            _render_moduli_figure(base, rows)
        print(f"wrote {base}.csv")
        return 0

    raise SystemExit2(f"unknown analysis {args.what!r}")


def _render_moduli_figure(base, rows):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = np.array(rows)
    fig, ax = plt.subplots(figsize=(7, 5))
    for idx in sorted(set(int(i) for i in data[:, 3])):
        sel = data[data[:, 3] == idx]
        ax.plot(sel[:, 0], sel[:, 4], label=f"eigenvalue {idx}")
    ax.set_xlabel("beta")
    ax.set_ylabel("amplification modulus")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(base + ".png", dpi=150)
    plt.close(fig)


def cmd_convergence(args, argv):
    if args.case not in ("gaussian2d", "gaussian3d"):
        raise SystemExit2("convergence studies use the radial reference; "
                          "choose gaussian2d or gaussian3d")
    spec = CASES[args.case]
    ns = [int(x) for x in str(args.n or "").split(",") if x]
    if len(ns) < 2:
        raise SystemExit2("give at least two grid sizes, e.g. --n 25,50,100")
    t_end = args.t_end if args.t_end is not None else spec.default_t_end
    model = spec.model()
    var_names = list(model.var_names)
    os.makedirs(args.out, exist_ok=True)

    results = []
    ref_cache = {}
    for n in ns:
        grid = spec.make_grid(n)
        dtargs = argparse.Namespace(dt=args.dt, cfl=args.cfl, steps=None,
                                    t_end=t_end)
        dt, steps = _time_stepping(dtargs, spec, grid)
        state = init_case(args.case, grid)
        final = advance(state, model, dt, steps, args.splitting)
        if not np.isfinite(final.data).all():
            print("numerical failure: non-finite values detected",
                  file=sys.stderr)
            return 3
        key = (grid.n, grid.h)
        if key not in ref_cache:
            ref_cache[key] = radial_reference_state(args.case, grid, t_end,
                                                    N=args.refn)
        err = l1_error(final, ref_cache[key], "A")
        results.append((n, min(grid.h), err))

    base = os.path.join(args.out, f"{args.case}_convergence")
    hdr = ["n", "h"] + [f"l1_{v}" for v in var_names] + ["order_p"]
    print(",".join(hdr))
    lines = []
    prev = None
    for n, hmin, err in results:
        if prev is not None and prev[0] != hmin:
            order = (np.log(prev[1][-1] / err[-1])
                     / np.log(prev[0] / hmin))
        else:
            order = float("nan")
        line = ([str(n), _fmt(hmin)] + [_fmt(e) for e in err]
                + [_fmt(order)])
        print(",".join(line))
        lines.append(",".join(line))
        prev = (hmin, err)
    with open(base + ".csv", "w") as f:
        f.write(",".join(hdr) + "\n")
        for line in lines:
            f.write(line + "\n")
    print(f"wrote {base}.csv")
    return 0


def cmd_dump_stencils(args, argv):
    for d in ([args.dim] if args.dim else [1, 2, 3]):
        print(f"== dimension {d} ==")
        print(format_stencils(d))
    print(f"stencil tables sha256: {stencil_hash()}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="activeflux",
        description="Active Flux solver and Fourier analyzer")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="flat key=value file with defaults")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--splitting", choices=SPLITTINGS, default="upwind")
        sp.add_argument("--figures", action="store_true",
                        help="render figures next to the delimited output")

    pr = sub.add_parser("run", help="run one experiment")
    common(pr)
    pr.add_argument("--case", required=True)
    pr.add_argument("--n", type=int)
    pr.add_argument("--nx", type=int)
    pr.add_argument("--ny", type=int)
    pr.add_argument("--nz", type=int)
    pr.add_argument("--cfl", type=float)
    pr.add_argument("--dt", type=float)
    pr.add_argument("--t-end", type=float)
    pr.add_argument("--steps", type=int)
    pr.add_argument("--boundary", choices=("periodic", "zerograd"))
    pr.add_argument("--every", type=int,
                    help="record diagnostics every this many steps")
    pr.set_defaults(func=cmd_run)

    pa = sub.add_parser("analyze", help="spectral analyses")
    pa.add_argument("what", choices=("kernel", "stability", "moduli",
                                     "detcheck"))
    common(pa)
    pa.add_argument("--problem", default="acoustics2d")
    pa.add_argument("--samples", type=int, default=64)
    pa.add_argument("--dt", type=float)
    pa.add_argument("--phi", type=float, default=0.0,
                    help="direction angle of the wavevector ray")
    pa.set_defaults(func=cmd_analyze)

    pc = sub.add_parser("convergence", help="grid convergence study")
    common(pc)
    pc.add_argument("--case", required=True)
    pc.add_argument("--n", help="comma-separated grid sizes")
    pc.add_argument("--cfl", type=float)
    pc.add_argument("--dt", type=float)
    pc.add_argument("--t-end", type=float)
    pc.add_argument("--refn", type=int, default=200000,
                    help="cells in the radial reference solver")
    pc.set_defaults(func=cmd_convergence)

    pd = sub.add_parser("dump-stencils",
                        help="print the derivative stencil tables")
    pd.add_argument("--dim", type=int, choices=(1, 2, 3))
    pd.set_defaults(func=cmd_dump_stencils)
    return p


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "config"):
        args = _apply_config(args, argv)
    if hasattr(args, "splitting"):
        args.splitting_given = any(a.startswith("--splitting")
                                   for a in argv)
    try:
        return args.func(args, argv)
    except SystemExit2:
        raise


if __name__ == "__main__":
    sys.exit(main())
