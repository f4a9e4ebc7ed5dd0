"""Acceptance: render-all consumes the CLI figure data end to end."""

import time

from vise_figures.cli import main


def test_criterion_11_render_all(data_dir, tmp_path, capsys):
    started = time.time()
    failures = []

    out_dir = tmp_path / "images"
    code = main(["render-all", "--data-dir", str(data_dir), "--out-dir", str(out_dir)])
    capsys.readouterr()
    if code != 0:
        failures.append(f"render-all exited {code}")
    images = sorted(out_dir.glob("figure*.png"))
    if len(images) != 8:
        failures.append(f"expected 8 images, found {[p.name for p in images]}")
    if any(p.stat().st_size < 1000 for p in images):
        failures.append("suspiciously small image written")

    # schema-mismatch inputs fail with an error naming the column
    broken = tmp_path / "broken"
    broken.mkdir()
    for path in data_dir.iterdir():
        target = broken / path.name
        if path.name == "figure1.csv":
            target.write_text(path.read_text().replace(",society", ",soc"))
        else:
            target.write_bytes(path.read_bytes())
    code = main(["render-all", "--data-dir", str(broken), "--out-dir", str(tmp_path / "img2")])
    err = capsys.readouterr().err
    if code == 0:
        failures.append("schema mismatch did not fail")
    if "'society'" not in err:
        failures.append(f"error does not name the missing column: {err!r}")

    status = "PASS" if not failures else "FAIL"
    detail = "" if not failures else " | " + "; ".join(failures)
    print(f"[criterion 11] {status} | render-all produces eight images; "
          f"schema errors name columns ({time.time() - started:.1f}s){detail}")
    assert not failures, "; ".join(failures)
