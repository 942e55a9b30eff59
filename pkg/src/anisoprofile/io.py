"""File formats used by the command-line tools.

Images travel either as PNG (8- or 16-bit grayscale, values rescaled to the
full integer range) or as a small raw float64 container that round-trips
exactly.  Tables are plain CSV, small result/metadata records are flat
``key=value`` text, and plots are hand-emitted SVG.  All writers produce
byte-identical output for identical inputs.
"""

import struct

import numpy as np
from PIL import Image

from .profile import AngularProfile
from .spectral import validate_image

__all__ = [
    "RAW_MAGIC",
    "save_image_raw",
    "load_image_raw",
    "save_image_png",
    "load_image_png",
    "save_image",
    "load_image",
    "write_profile_csv",
    "read_profile_csv",
    "write_record",
    "read_record",
    "registration_record",
    "write_metric_csv",
    "svg_line_plot",
]

RAW_MAGIC = b"ANIM"
_RAW_HEADER = struct.Struct("<4sIII")  # magic, width, height, reserved


def save_image_raw(path, image):
    """Write a float64 image as magic + dims header + row-major LE payload."""
    x = validate_image(image)
    h, w = x.shape
    with open(path, "wb") as f:
        f.write(_RAW_HEADER.pack(RAW_MAGIC, w, h, 0))
        f.write(np.ascontiguousarray(x, dtype="<f8").tobytes())


def load_image_raw(path):
    with open(path, "rb") as f:
        header = f.read(_RAW_HEADER.size)
        if len(header) < _RAW_HEADER.size:
            raise ValueError(f"truncated raw image header in {path}")
        magic, w, h, _ = _RAW_HEADER.unpack(header)
        if magic != RAW_MAGIC:
            raise ValueError(f"{path} is not a raw image file (bad magic {magic!r})")
        payload = f.read()
    expected = h * w * 8
    if len(payload) != expected:
        raise ValueError(
            f"raw image payload in {path} has {len(payload)} bytes, expected {expected}"
        )
    return np.frombuffer(payload, dtype="<f8").reshape(h, w).astype(np.float64)


def save_image_png(path, image, bits=16):
    """Write a grayscale PNG, linearly rescaling the image to the full range.

    A constant image maps to all zeros.
    """
    if bits not in (8, 16):
        raise ValueError(f"bits must be 8 or 16, got {bits}")
    x = validate_image(image)
    lo, hi = float(x.min()), float(x.max())
    span = hi - lo
    top = (1 << bits) - 1
    if span > 0.0:
        scaled = np.round((x - lo) * (top / span))
    else:
        scaled = np.zeros_like(x)
    if bits == 8:
        Image.fromarray(scaled.astype(np.uint8), mode="L").save(path)
    else:
        Image.fromarray(scaled.astype(np.uint16)).save(path)


def load_image_png(path):
    """Read a grayscale PNG as float64 in [0, 1]."""
    with Image.open(path) as im:
        mode = im.mode
        arr = np.asarray(im)
    if mode == "L":
        return arr.astype(np.float64) / 255.0
    if mode in ("I;16", "I"):
        # 16-bit grayscale PNGs load as either mode depending on the decoder
        return arr.astype(np.float64) / 65535.0
    raise ValueError(f"{path} is not a grayscale image (mode {mode!r})")


def save_image(path, image, bits=16):
    """Write by extension: .anim is the exact raw format, .png is PNG."""
    p = str(path)
    if p.endswith(".anim"):
        save_image_raw(path, image)
    elif p.endswith(".png"):
        save_image_png(path, image, bits=bits)
    else:
        raise ValueError(f"unsupported image extension on {path} (use .anim or .png)")


def load_image(path):
    p = str(path)
    if p.endswith(".anim"):
        return load_image_raw(path)
    if p.endswith(".png"):
        return load_image_png(path)
    raise ValueError(f"unsupported image extension on {path} (use .anim or .png)")


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_profile_csv(path, profile: AngularProfile):
    lines = ["angle_deg,value"]
    for ang, val in zip(profile.angles_deg, profile.values):
        lines.append(f"{_fmt(float(ang))},{_fmt(float(val))}")
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def read_profile_csv(path):
    with open(path) as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    if not lines or lines[0] != "angle_deg,value":
        raise ValueError(f"{path} is not a profile CSV (missing angle_deg,value header)")
    values = []
    for ln in lines[1:]:
        _, _, val = ln.partition(",")
        values.append(float(val))
    values = np.asarray(values, dtype=np.float64)
    normalized = bool(abs(values.sum() - 1.0) < 1e-9)
    return AngularProfile(values, normalized=normalized)


def write_record(path, mapping):
    """Write a flat key=value record, one pair per line, in mapping order."""
    lines = [f"{key}={_fmt(value)}" for key, value in mapping.items()]
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def read_record(path):
    """Read a flat key=value record; values parse to int/float/bool if they can."""
    out = {}
    with open(path) as f:
        for ln in f:
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            key, sep, val = ln.partition("=")
            if not sep:
                raise ValueError(f"malformed record line in {path}: {ln!r}")
            out[key.strip()] = _parse_value(val.strip())
    return out


def _parse_value(text):
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def registration_record(result):
    """Flatten a RegistrationResult into an ordered key=value mapping."""
    return {
        "gamma_deg": result.gamma_deg,
        "candidate1_deg": result.candidates[0],
        "candidate2_deg": result.candidates[1],
        "mse1": result.mses[0],
        "mse2": result.mses[1],
        "theta1_deg": result.theta1_deg,
        "theta2_deg": result.theta2_deg,
    }


def write_metric_csv(path, reports):
    """One CSV row per MetricReport; params flattened as k=v;k2=v2."""
    lines = ["method,metric,mean,std,n,params"]
    for r in reports:
        params = ";".join(f"{k}={_fmt(v)}" for k, v in r.params.items())
        lines.append(
            f"{r.method},{r.metric},{_fmt(r.mean)},{_fmt(r.std)},{r.n},{params}"
        )
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


_SVG_COLORS = ("#1b6ca8", "#c23b22", "#3a7d44", "#8a4f9e", "#b8860b", "#444444")


def svg_line_plot(path, curves, title="", width=720, height=420):
    """Emit a minimal SVG line plot of angle -> value curves on shared axes.

    ``curves`` maps a label to an AngularProfile or an (angles, values) pair.
    The emitter is deliberately dumb: it draws the axes box, one polyline per
    curve and a small legend, nothing else.
    """
    margin = 46
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin
    series = []
    for label, curve in curves.items():
        if isinstance(curve, AngularProfile):
            xs, ys = curve.angles_deg, curve.values
        else:
            xs, ys = curve
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        if xs.shape != ys.shape or xs.ndim != 1 or xs.size < 2:
            raise ValueError(f"curve {label!r} needs matching 1-d angle/value arrays")
        series.append((str(label), xs, ys))
    if not series:
        raise ValueError("svg_line_plot needs at least one curve")

    x_lo = min(float(xs.min()) for _, xs, _ in series)
    x_hi = max(float(xs.max()) for _, xs, _ in series)
    y_lo = min(0.0, min(float(ys.min()) for _, _, ys in series))
    y_hi = max(float(ys.max()) for _, _, ys in series)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def px(x):
        return margin + (x - x_lo) * (plot_w / (x_hi - x_lo))

    def py(y):
        return height - margin - (y - y_lo) * (plot_h / (y_hi - y_lo))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333" stroke-width="1"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="{margin - 14}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    for i, (label, xs, ys) in enumerate(series):
        color = _SVG_COLORS[i % len(_SVG_COLORS)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
        )
        ly = margin + 16 + 16 * i
        parts.append(
            f'<line x1="{margin + 8}" y1="{ly - 4}" x2="{margin + 28}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{margin + 34}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{label}</text>'
        )
    for frac in (0.0, 0.5, 1.0):
        xv = x_lo + frac * (x_hi - x_lo)
        parts.append(
            f'<text x="{px(xv):.1f}" y="{height - margin + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{xv:g}</text>'
        )
        yv = y_lo + frac * (y_hi - y_lo)
        parts.append(
            f'<text x="{margin - 6}" y="{py(yv) + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{yv:.3g}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(parts) + "\n")
