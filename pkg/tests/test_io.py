import numpy as np
import pytest
from numpy.testing import assert_allclose
from PIL import Image

from anisoprofile.io import (
    load_image,
    load_image_png,
    load_image_raw,
    read_profile_csv,
    read_record,
    registration_record,
    save_image,
    save_image_png,
    save_image_raw,
    svg_line_plot,
    write_metric_csv,
    write_profile_csv,
    write_record,
)
from anisoprofile.metrics import MetricReport
from anisoprofile.profile import AngularProfile
from anisoprofile.registration import register
from anisoprofile.synthgen import GaborMixSpec, gen_gabor_image


def test_raw_roundtrip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.normal(size=(12, 9))
    p = tmp_path / "img.anim"
    save_image_raw(p, x)
    y = load_image_raw(p)
    assert y.dtype == np.float64
    assert (x == y).all()


def test_raw_rejects_bad_magic_and_truncation(tmp_path):
    p = tmp_path / "img.anim"
    save_image_raw(p, np.zeros((8, 8)))
    data = p.read_bytes()
    (tmp_path / "bad.anim").write_bytes(b"XXXX" + data[4:])
    with pytest.raises(ValueError):
        load_image_raw(tmp_path / "bad.anim")
    (tmp_path / "short.anim").write_bytes(data[:10])
    with pytest.raises(ValueError):
        load_image_raw(tmp_path / "short.anim")
    (tmp_path / "cut.anim").write_bytes(data[:-17])
    with pytest.raises(ValueError):
        load_image_raw(tmp_path / "cut.anim")


def test_png_16bit_roundtrip(tmp_path):
    rng = np.random.default_rng(1)
    x = rng.uniform(-1.0, 1.0, size=(16, 16))
    p = tmp_path / "img.png"
    save_image_png(p, x)
    y = load_image_png(p)
    rescaled = (x - x.min()) / (x.max() - x.min())
    assert np.abs(y - rescaled).max() <= 0.5 / 65535 + 1e-12
    # a second save of the loaded image reproduces the file byte for byte
    p2 = tmp_path / "img2.png"
    save_image_png(p2, y)
    assert p.read_bytes() == p2.read_bytes()


def test_png_8bit_roundtrip(tmp_path):
    rng = np.random.default_rng(2)
    x = rng.uniform(0.0, 1.0, size=(10, 14))
    p = tmp_path / "img8.png"
    save_image_png(p, x, bits=8)
    y = load_image_png(p)
    rescaled = (x - x.min()) / (x.max() - x.min())
    assert np.abs(y - rescaled).max() <= 0.5 / 255 + 1e-12


def test_png_constant_image_maps_to_zeros(tmp_path):
    p = tmp_path / "flat.png"
    save_image_png(p, np.full((9, 9), 3.7))
    assert (load_image_png(p) == 0.0).all()


def test_png_rejects_color_and_bad_bits(tmp_path):
    p = tmp_path / "rgb.png"
    Image.new("RGB", (8, 8), (10, 20, 30)).save(p)
    with pytest.raises(ValueError):
        load_image_png(p)
    with pytest.raises(ValueError):
        save_image_png(tmp_path / "x.png", np.zeros((8, 8)), bits=12)


def test_image_dispatch_by_extension(tmp_path):
    x = np.random.default_rng(3).normal(size=(8, 8))
    save_image(tmp_path / "a.anim", x)
    assert (load_image(tmp_path / "a.anim") == x).all()
    save_image(tmp_path / "a.png", x)
    assert load_image(tmp_path / "a.png").shape == (8, 8)
    with pytest.raises(ValueError):
        save_image(tmp_path / "a.tif", x)
    with pytest.raises(ValueError):
        load_image(tmp_path / "a.tif")


def test_profile_csv_roundtrip(tmp_path):
    values = np.asarray([0.4, 0.1, 0.3, 0.2])
    prof = AngularProfile(values, normalized=True)
    p = tmp_path / "prof.csv"
    write_profile_csv(p, prof)
    text = p.read_text()
    assert text.startswith("angle_deg,value\n")
    back = read_profile_csv(p)
    assert back.normalized
    assert (back.values == values).all()  # %.17g round-trips float64 exactly

    raw = AngularProfile(np.asarray([5.0, 1.0, 2.0]), normalized=False)
    write_profile_csv(p, raw)
    back = read_profile_csv(p)
    assert not back.normalized
    assert (back.values == raw.values).all()


def test_profile_csv_rejects_wrong_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("angle,value\n0,1\n")
    with pytest.raises(ValueError):
        read_profile_csv(p)


def test_csv_writers_are_byte_deterministic(tmp_path):
    prof = AngularProfile(np.linspace(0.1, 1.0, 18), normalized=False)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_profile_csv(a, prof)
    write_profile_csv(b, prof)
    assert a.read_bytes() == b.read_bytes()

    reports = [
        MetricReport("cake", "angular_distance_deg", 0.1, 0.05, 30, {"sigma": 20.0}),
        MetricReport("binning", "angular_distance_deg", 1.0, 0.2, 30, {}),
    ]
    write_metric_csv(a, reports)
    write_metric_csv(b, reports)
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().strip().split("\n")
    assert lines[0] == "method,metric,mean,std,n,params"
    assert lines[1].startswith("cake,angular_distance_deg,")
    assert lines[1].endswith("sigma=20")
    assert lines[2].endswith(",30,")


def test_record_roundtrip_and_parsing(tmp_path):
    p = tmp_path / "rec.txt"
    write_record(p, {"method": "cake", "n": 30, "sigma": 2.5, "refine": True})
    back = read_record(p)
    assert back == {"method": "cake", "n": 30, "sigma": 2.5, "refine": True}
    assert isinstance(back["n"], int) and isinstance(back["sigma"], float)

    p.write_text("# comment\n\nkey=value\n")
    assert read_record(p) == {"key": "value"}
    p.write_text("no separator here\n")
    with pytest.raises(ValueError):
        read_record(p)


def test_registration_record_order(tmp_path):
    img, _ = gen_gabor_image(GaborMixSpec(60.0, 50.0, n_atoms=40, size=64, seed=4))
    res = register(img, img, n_angles=36)
    rec = registration_record(res)
    assert list(rec) == [
        "gamma_deg", "candidate1_deg", "candidate2_deg",
        "mse1", "mse2", "theta1_deg", "theta2_deg",
    ]
    p = tmp_path / "reg.txt"
    write_record(p, rec)
    back = read_record(p)
    assert back["gamma_deg"] == res.gamma_deg
    assert back["mse1"] == res.mses[0]


def test_svg_line_plot_output(tmp_path):
    angles = np.arange(36) * 5.0
    curves = {
        "cake": AngularProfile(np.cos(np.deg2rad(angles)) ** 2 / 18.0, normalized=True),
        "ridge": (angles, np.sin(np.deg2rad(angles)) ** 2),
    }
    p = tmp_path / "plot.svg"
    svg_line_plot(p, curves, title="angular profiles")
    text = p.read_text()
    assert text.startswith("<svg ")
    assert text.count("<polyline") == 2
    assert "angular profiles" in text
    q = tmp_path / "plot2.svg"
    svg_line_plot(q, curves, title="angular profiles")
    assert p.read_bytes() == q.read_bytes()


def test_svg_line_plot_validation(tmp_path):
    with pytest.raises(ValueError):
        svg_line_plot(tmp_path / "x.svg", {})
    with pytest.raises(ValueError):
        svg_line_plot(tmp_path / "x.svg", {"bad": (np.arange(3), np.arange(4))})
