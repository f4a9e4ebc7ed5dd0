"""Shared fixture: generate coarse vise figure CSVs through the CLI."""

import subprocess
import sys

import pytest

# Coarse preset overrides keep data generation to a few seconds while
# exercising the documented schemas end to end.
_OVERRIDES = {
    1: ["t_step=0.2"],
    2: ["t_over_sigma_step=0.5", "delta_step=0.1"],
    3: ["t_over_sigma_step=0.5", "delta_step=0.1"],
    4: ["t_step=0.2"],
    5: ["a_alpha_step=0.12", "b_mu_step=0.25", "delta_step=0.1"],
    6: ["delta_step=0.2"],
    7: ["n=20", "mu_step=0.2"],
    8: ["n_values=10", "mu_step=0.25"],
}


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("vise-data")
    for figure_id, overrides in _OVERRIDES.items():
        cmd = [sys.executable, "-m", "vise.cli", "figure", str(figure_id), "--out-dir", str(out)]
        for item in overrides:
            cmd += ["--set", item]
        subprocess.run(cmd, check=True, capture_output=True, text=True)
    return out
