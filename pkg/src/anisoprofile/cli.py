"""Command-line front end: synthesis, analysis, registration, rotation and
the benchmark suites.

Every command is deterministic given its flags (including the seed); re-runs
write byte-identical CSV output.  Exit codes: 0 success, 1 validation error,
2 I/O error, 3 numerical failure (degenerate profile).
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io as fio
from .filterbank import METHODS, make_filter_bank
from .metrics import (
    MetricReport,
    angular_distance,
    profile_distance_db,
    profile_equivariance_error,
    registration_equivariance_error,
    von_mises_reference_profile,
)
from .profile import (
    DegenerateProfileError,
    angular_profile,
    normalize_profile,
    principal_orientation,
)
from .registration import register
from .spectral import WindowSpec, periodogram, rotate_bilinear
from .synthgen import (
    GaborMixSpec,
    gen_gabor_image,
    gen_isotropic,
    gen_oriented_oscillation,
)

__all__ = ["main"]

# Frozen table1 suite protocol; all non-default filter parameters are reported
# in the CSV params column.
TABLE1_MU = 60.0
TABLE1_SIGMAS = (5.0, 20.0, 50.0)
TABLE1_DIST_ANGLES = 36
TABLE1_DB_ANGLES = 180
TABLE1_DB_TRIALS = 2
TABLE1_DB_CAKE_POWER = 1.0
TABLE1_DB_RIDGE_SIGMA = 1.2


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with the validation code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(p, *, method_default="cake", n_default=1, size_default=256):
    p.add_argument("--method", choices=(*METHODS, "all"), default=None,
                   help=f"filter bank method (default {method_default})")
    p.add_argument("--angles", type=int, default=None, metavar="M",
                   help="number of angular bins (default 180)")
    p.add_argument("--window", choices=("disk-hann", "none"), default=None)
    p.add_argument("--refine", choices=("on", "off"), default=None,
                   help="parabolic peak refinement (default on)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n", type=int, default=None,
                   help=f"number of images/pairs (default {n_default})")
    p.add_argument("--trials", type=int, default=None,
                   help="rotation trials for equivariance metrics (default 36)")
    p.add_argument("--size", type=int, default=None,
                   help=f"generated image side (default {size_default})")
    p.add_argument("--sigma-perp", type=float, default=None, dest="sigma_perp",
                   help="ridge bank perpendicular sigma (default 1.5)")
    p.add_argument("--power", type=float, default=None,
                   help="cake bank cosine exponent (default 2)")
    p.add_argument("--out", default=None, metavar="DIR",
                   help="output directory (default .)")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker threads for benchmark suites")
    p.add_argument("--config", default=None, metavar="FILE",
                   help="flat key=value config file; flags override it")
    return dict(method=method_default, angles=180, window="disk-hann", refine="on",
                seed=0, n=n_default, trials=36, size=size_default, sigma_perp=None,
                power=None, out=".", jobs=min(4, os.cpu_count() or 1))


def _build_parser():
    parser = _Parser(prog="anisoprofile",
                     description="Oriented spectral analysis of images: angular "
                                 "power profiles, principal orientation, and "
                                 "rotation registration.")
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = {}

    p = sub.add_parser("synth", help="generate synthetic images")
    p.add_argument("--kind", choices=("gabor", "oscillation", "isotropic"),
                   default=None, help="generator (default gabor)")
    p.add_argument("--mu", type=float, default=None, help="mean orientation, deg")
    p.add_argument("--sigma", type=float, default=None,
                   help="von Mises concentration")
    p.add_argument("--angle", type=float, default=None,
                   help="oscillation angle, deg")
    p.add_argument("--wavelength", type=float, default=None,
                   help="oscillation wavelength, px")
    p.add_argument("--atoms", type=int, default=None, help="atoms per image")
    p.add_argument("--format", choices=("anim", "png"), default=None,
                   dest="fmt", help="image file format (default anim)")
    defaults["synth"] = _add_common(p) | dict(kind="gabor", mu=60.0, sigma=20.0,
                                              angle=25.0, wavelength=8.0,
                                              atoms=300, fmt="anim")

    p = sub.add_parser("analyze", help="angular profile and orientation of an image")
    p.add_argument("image", help="input image (.anim or .png)")
    defaults["analyze"] = _add_common(p, method_default="all")

    p = sub.add_parser("register", help="estimate the rotation between two images")
    p.add_argument("image1")
    p.add_argument("image2")
    defaults["register"] = _add_common(p)

    p = sub.add_parser("rotate", help="rotate an image by a given angle")
    p.add_argument("image")
    p.add_argument("--angle", type=float, required=True,
                   help="rotation angle in [0, 360)")
    defaults["rotate"] = _add_common(p)

    p = sub.add_parser("bench", help="benchmark suites with CSV reports")
    p.add_argument("--suite", choices=("table1", "register"), default=None,
                   help="which suite to run (default table1)")
    p.add_argument("--pair", nargs=2, default=None, metavar=("IMG1", "IMG2"),
                   help="user-supplied image pair for the register suite")
    defaults["bench"] = _add_common(p, n_default=30, size_default=1024) | dict(
        suite="table1", pair=None)

    return parser, defaults


def _merge_config(args, defaults):
    """Apply precedence: CLI flags > config file entries > defaults."""
    cfg = dict(defaults)
    config_path = getattr(args, "config", None)
    if config_path:
        for key, value in fio.read_record(config_path).items():
            k = key.replace("-", "_")
            if k not in cfg:
                raise ValueError(f"unknown config key: {key}")
            cfg[k] = value
    for key in cfg:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _methods(cfg):
    m = cfg["method"]
    if m == "all":
        return list(METHODS)
    if m not in METHODS:
        raise ValueError(f"unknown method: {m!r}")
    return [m]


def _flag_on(value, name):
    if isinstance(value, bool):
        return value
    if value in ("on", "off"):
        return value == "on"
    raise ValueError(f"{name} must be on or off, got {value!r}")


def _bank_params(cfg, method):
    params = {}
    if method == "ridge" and cfg.get("sigma_perp") is not None:
        params["sigma_perp"] = float(cfg["sigma_perp"])
    if method == "cake" and cfg.get("power") is not None:
        params["power"] = float(cfg["power"])
    return params


def _out_dir(cfg):
    out = str(cfg["out"])
    os.makedirs(out, exist_ok=True)
    return out


def _stem(path):
    return os.path.splitext(os.path.basename(str(path)))[0]


def cmd_synth(args, defaults):
    cfg = _merge_config(args, defaults)
    out = _out_dir(cfg)
    kind, size, seed = cfg["kind"], int(cfg["size"]), int(cfg["seed"])
    ext = "." + cfg["fmt"]
    written = []
    if kind == "oscillation":
        image, truth = gen_oriented_oscillation(float(cfg["angle"]),
                                                wavelength_px=float(cfg["wavelength"]),
                                                size=size)
        name = f"oscillation_{cfg['angle']:g}"
        fio.save_image(os.path.join(out, name + ext), image)
        fio.write_record(os.path.join(out, name + ".txt"),
                         dict(kind=truth.kind, angle_deg=truth.angle_deg,
                              wavelength_px=float(cfg["wavelength"]), size=size,
                              image=name + ext))
        written.append(name + ext)
    elif kind in ("gabor", "isotropic"):
        for i in range(int(cfg["n"])):
            s = seed + i
            if kind == "gabor":
                spec = GaborMixSpec(float(cfg["mu"]), float(cfg["sigma"]),
                                    n_atoms=int(cfg["atoms"]), size=size, seed=s)
                image, truth = gen_gabor_image(spec)
                name = f"gabor_{s:04d}"
                meta = dict(kind=truth.kind, mu_deg=truth.mu_deg, sigma=truth.sigma,
                            n_atoms=int(cfg["atoms"]), size=size, seed=s,
                            image=name + ext)
            else:
                image, truth = gen_isotropic(size=size, seed=s)
                name = f"isotropic_{s:04d}"
                meta = dict(kind=truth.kind, size=size, seed=s, image=name + ext)
            fio.save_image(os.path.join(out, name + ext), image)
            fio.write_record(os.path.join(out, name + ".txt"), meta)
            written.append(name + ext)
    else:
        raise ValueError(f"unknown generator kind: {kind!r}")
    print(f"wrote {len(written)} image(s) to {out}")
    return 0


def cmd_analyze(args, defaults):
    cfg = _merge_config(args, defaults)
    out = _out_dir(cfg)
    image = fio.load_image(args.image)
    window = WindowSpec(cfg["window"])
    refine = _flag_on(cfg["refine"], "refine")
    m_tot = int(cfg["angles"])
    stem = _stem(args.image)
    psd = periodogram(image, window)
    record = dict(image=os.path.basename(str(args.image)), angles=m_tot,
                  window=cfg["window"], refine=refine)
    curves = {}
    for method in _methods(cfg):
        bank = make_filter_bank(method, image.shape, m_tot, **_bank_params(cfg, method))
        prof = normalize_profile(angular_profile(psd, bank))
        est = principal_orientation(prof, refine=refine)
        ratio = float(prof.values.max()) * prof.n_angles
        fio.write_profile_csv(os.path.join(out, f"{stem}_profile_{method}.csv"), prof)
        record[f"eta_deg_{method}"] = est.eta_deg
        record[f"peak_to_mean_{method}"] = ratio
        curves[method] = prof
        note = "  (near-isotropic)" if ratio < 1.05 else ""
        print(f"{method}: eta = {est.eta_deg:.3f} deg  peak/mean = {ratio:.3f}{note}")
    fio.write_record(os.path.join(out, f"{stem}_analysis.txt"), record)
    fio.svg_line_plot(os.path.join(out, f"{stem}_profiles.svg"), curves,
                      title=f"angular profiles: {stem}")
    return 0


def cmd_register(args, defaults):
    cfg = _merge_config(args, defaults)
    out = _out_dir(cfg)
    methods = _methods(cfg)
    if len(methods) != 1:
        raise ValueError("register needs a single method, not 'all'")
    method = methods[0]
    x1 = fio.load_image(args.image1)
    x2 = fio.load_image(args.image2)
    res = register(x1, x2, method=method, window=WindowSpec(cfg["window"]),
                   n_angles=int(cfg["angles"]), refine=_flag_on(cfg["refine"], "refine"),
                   **_bank_params(cfg, method))
    rec = fio.registration_record(res)
    fio.write_record(os.path.join(out, f"register_{method}.txt"), rec)
    for key, value in rec.items():
        print(f"{key}={value:.6g}" if isinstance(value, float) else f"{key}={value}")
    return 0


def cmd_rotate(args, defaults):
    cfg = _merge_config(args, defaults)
    out = _out_dir(cfg)
    image = fio.load_image(args.image)
    rotated = rotate_bilinear(image, float(args.angle))
    ext = os.path.splitext(str(args.image))[1]
    dest = os.path.join(out, f"{_stem(args.image)}_rot{args.angle:g}{ext}")
    fio.save_image(dest, rotated)
    print(f"wrote {dest}")
    return 0


def _pool_map(jobs, fn, tasks):
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, tasks))


def _mean_std(values):
    a = np.asarray(values, dtype=np.float64)
    return float(a.mean()), float(a.std())


def _ordering_line(label, means, relation):
    c, r, b = (means[m] for m in METHODS)
    if relation == "ascending":  # smaller is better
        ok = c <= r < b
        detail = f"{c:.3f} <= {r:.3f} < {b:.3f}"
    else:  # "descending": larger is better
        ok = c > r > b
        detail = f"{c:.2f} > {r:.2f} > {b:.2f}"
    return f"ordering {label} cake/ridge/binning: {detail}: {'PASS' if ok else 'FAIL'}"


def _bench_table1(cfg):
    out = _out_dir(cfg)
    size, n, seed0 = int(cfg["size"]), int(cfg["n"]), int(cfg["seed"])
    jobs = int(cfg["jobs"])
    window = WindowSpec(cfg["window"])
    shape = (size, size)
    ridge_dist_sigma = 1.5 * size / 256.0

    corpora = {sigma: [gen_gabor_image(GaborMixSpec(TABLE1_MU, sigma, size=size,
                                                    seed=seed0 + i))[0]
                       for i in range(n)]
               for sigma in TABLE1_SIGMAS}

    # -- angular distance sub-table: grid-valued argmax on a coarse bank -----
    dist_params = {m: ({"sigma_perp": ridge_dist_sigma} if m == "ridge" else {})
                   for m in METHODS}
    banks = {m: make_filter_bank(m, shape, TABLE1_DIST_ANGLES, **dist_params[m])
             for m in METHODS}

    def dist_work(task):
        sigma, i = task
        psd = periodogram(corpora[sigma][i], window)
        errs = {}
        for m in METHODS:
            prof = normalize_profile(angular_profile(psd, banks[m]))
            eta = principal_orientation(prof, refine=False).eta_deg
            errs[m] = angular_distance(eta, TABLE1_MU)
        return errs

    tasks = [(sigma, i) for sigma in TABLE1_SIGMAS for i in range(n)]
    per_task = _pool_map(jobs, dist_work, tasks)
    dist_rows, dist_means = [], {}
    for sigma in TABLE1_SIGMAS:
        errs = {m: [] for m in METHODS}
        for task, res in zip(tasks, per_task):
            if task[0] == sigma:
                for m in METHODS:
                    errs[m].append(res[m])
        for m in METHODS:
            mean, std = _mean_std(errs[m])
            params = dict(sigma=sigma, n_angles=TABLE1_DIST_ANGLES, refine=False,
                          size=size, **dist_params[m])
            dist_rows.append(MetricReport(m, "angular_distance_deg", mean, std, n,
                                          params))
            dist_means[(sigma, m)] = mean
    del banks

    # -- equivariance dB sub-table + reference-profile variant ---------------
    db_params = {"cake": {"power": TABLE1_DB_CAKE_POWER},
                 "ridge": {"sigma_perp": TABLE1_DB_RIDGE_SIGMA},
                 "binning": {}}
    eq_rows, ref_rows = [], []
    eq_means = {}
    refs = {sigma: von_mises_reference_profile(TABLE1_MU, sigma, TABLE1_DB_ANGLES)
            for sigma in TABLE1_SIGMAS}
    for m in METHODS:
        bank = make_filter_bank(m, shape, TABLE1_DB_ANGLES, **db_params[m])

        def db_work(task, method=m, bank=bank):
            sigma, i = task
            img = corpora[sigma][i]
            rep = profile_equivariance_error(img, method, trials=TABLE1_DB_TRIALS,
                                             rng=np.random.default_rng(100 + i),
                                             window=window, bank=bank)
            prof = normalize_profile(angular_profile(periodogram(img, window), bank))
            return rep.mean, profile_distance_db(prof, refs[sigma])

        per_task = _pool_map(jobs, db_work, tasks)
        for sigma in TABLE1_SIGMAS:
            eq = [r[0] for t, r in zip(tasks, per_task) if t[0] == sigma]
            ref = [r[1] for t, r in zip(tasks, per_task) if t[0] == sigma]
            params = dict(sigma=sigma, n_angles=TABLE1_DB_ANGLES,
                          trials=TABLE1_DB_TRIALS, size=size, **db_params[m])
            mean, std = _mean_std(eq)
            eq_rows.append(MetricReport(m, "profile_equivariance_db", mean, std, n,
                                        params))
            eq_means[(sigma, m)] = mean
            mean, std = _mean_std(ref)
            ref_rows.append(MetricReport(m, "profile_vs_reference_db", mean, std, n,
                                         params))
        del bank

    # CSV rows grouped per sigma to mirror the text table
    order = {m: k for k, m in enumerate(METHODS)}
    key = lambda r: (r.params["sigma"], order[r.method])
    fio.write_metric_csv(os.path.join(out, "table1_distance.csv"),
                         sorted(dist_rows, key=key))
    fio.write_metric_csv(os.path.join(out, "table1_equivariance.csv"),
                         sorted(eq_rows, key=key))
    fio.write_metric_csv(os.path.join(out, "table1_reference.csv"),
                         sorted(ref_rows, key=key))

    by = {(r.params["sigma"], r.method, r.metric): r
          for r in dist_rows + eq_rows + ref_rows}
    lines = [f"Table-1-style benchmark  (N={n} per sigma, mu={TABLE1_MU:g}, "
             f"size={size})", ""]
    for sigma in TABLE1_SIGMAS:
        lines.append(f"sigma={sigma:g}")
        lines.append(f"  {'method':8s}  {'angular distance (deg)':>24s}  "
                     f"{'equivariance (dB)':>20s}  {'vs reference (dB)':>20s}")
        for m in METHODS:
            d = by[(sigma, m, 'angular_distance_deg')]
            e = by[(sigma, m, 'profile_equivariance_db')]
            f = by[(sigma, m, 'profile_vs_reference_db')]
            lines.append(f"  {m:8s}  {d.mean:12.3f} +- {d.std:6.3f}  "
                         f"{e.mean:10.2f} +- {e.std:5.2f}  "
                         f"{f.mean:10.2f} +- {f.std:5.2f}")
        lines.append("  " + _ordering_line(
            "angular distance", {m: dist_means[(sigma, m)] for m in METHODS},
            "ascending"))
        lines.append("  " + _ordering_line(
            "equivariance dB", {m: eq_means[(sigma, m)] for m in METHODS},
            "descending"))
        gap = eq_means[(sigma, "ridge")] - eq_means[(sigma, "binning")]
        lines.append(f"  ridge - binning equivariance gap: {gap:.2f} dB "
                     f"({'PASS' if gap >= 10.0 else 'FAIL'} >= 10)")
        lines.append("")
    text = "\n".join(lines) + "\n"
    with open(os.path.join(out, "table1.txt"), "w", newline="\n") as f:
        f.write(text)
    print(text, end="")
    return 0


def _bench_register(cfg, pair):
    out = _out_dir(cfg)
    jobs, trials = int(cfg["jobs"]), int(cfg["trials"])
    window = WindowSpec(cfg["window"])
    m_tot = int(cfg["angles"])
    if pair is not None:
        x1 = fio.load_image(pair[0])
        x2 = fio.load_image(pair[1])
        rows = []
        for m in METHODS:
            try:
                rows.append(registration_equivariance_error(
                    x1, x2, m, trials=trials, rng=np.random.default_rng(int(cfg["seed"])),
                    n_angles=m_tot, window=window))
            except ValueError as e:
                # partial failures become rows, the run continues
                rows.append(MetricReport(m, "registration_equivariance_deg",
                                         float("nan"), 0.0, 1,
                                         {"failed": str(e)[:100]}))
        fio.write_metric_csv(os.path.join(out, "register_equivariance.csv"), rows)
        for r in rows:
            print(f"{r.method}: registration equivariance "
                  f"{r.mean:.3f} +- {r.std:.3f} deg (n={r.n})")
        return 0

    # synthetic construct-and-recover protocol
    size, n, seed0 = int(cfg["size"]), int(cfg["n"]), int(cfg["seed"])
    rng = np.random.default_rng(seed0)
    gammas = (np.arange(n) + rng.uniform(0.0, 1.0, size=n)) * (360.0 / n)

    def work(i):
        image, _ = gen_gabor_image(GaborMixSpec(TABLE1_MU, 50.0, size=size,
                                                seed=seed0 + i))
        rotated = rotate_bilinear(image, float(gammas[i]))
        errs = {}
        for m in METHODS:
            res = register(image, rotated, method=m, window=window, n_angles=m_tot)
            errs[m] = angular_distance(res.gamma_deg, float(gammas[i]), 360.0)
        return errs

    per_pair = _pool_map(jobs, work, range(n))
    rows = []
    for m in METHODS:
        mean, std = _mean_std([p[m] for p in per_pair])
        rows.append(MetricReport(m, "registration_error_deg", mean, std, n,
                                 dict(n_angles=m_tot, size=size)))
    fio.write_metric_csv(os.path.join(out, "register_synthetic.csv"), rows)
    for r in rows:
        print(f"{r.method}: registration error {r.mean:.3f} +- {r.std:.3f} deg "
              f"over {r.n} pairs")
    return 0


def cmd_bench(args, defaults):
    cfg = _merge_config(args, defaults)
    if cfg["suite"] == "table1":
        return _bench_table1(cfg)
    if cfg["suite"] == "register":
        # synthetic register pairs default to a desk-scale image size
        if args.size is None and "size" not in _config_keys(args):
            cfg["size"] = 256
        return _bench_register(cfg, cfg["pair"])
    raise ValueError(f"unknown bench suite: {cfg['suite']!r}")


def _config_keys(args):
    config_path = getattr(args, "config", None)
    if not config_path:
        return ()
    return tuple(k.replace("-", "_") for k in fio.read_record(config_path))


_COMMANDS = {
    "synth": cmd_synth,
    "analyze": cmd_analyze,
    "register": cmd_register,
    "rotate": cmd_rotate,
    "bench": cmd_bench,
}


def main(argv=None):
    parser, defaults = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args, defaults[args.command])
    except SystemExit as e:
        return int(e.code) if e.code else 0
    except DegenerateProfileError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
