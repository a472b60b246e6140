"""Generate the sample inputs used by the CLI examples.

Run from the repository root:

    python3 docs/data/make_inputs.py

Every file is produced deterministically, so regenerating never changes
the documented outputs.
"""

from pathlib import Path

import numpy as np

from germkit.grid import GridField
from germkit.jsonio import save_series
from germkit.series import TruncatedSeries

HERE = Path(__file__).resolve().parent

SERIES = {
    "f_sq.json": (["0", "1"], 8),
    "g_negsq.json": (["0", "-1"], 8),
    "g_cube.json": (["0", "0", "1"], 8),
    "two_z.json": (["2"], 8),
    "eight_z.json": (["8"], 8),
    "parabolic.json": (["-1", "0", "-2"], 16),
}


def main() -> None:
    for name, (coeffs, order) in SERIES.items():
        save_series(TruncatedSeries.from_coefficients(coeffs, order), HERE / name)
    phi = GridField.from_function(
        (-2.0, -2.0, 2.0, 2.0), 64, 64, lambda z: np.where(np.abs(z) < 1.0, 1.0, 0.0)
    )
    phi.save(HERE / "phi.bin")
    print(f"wrote {len(SERIES) + 1} files to {HERE}")


if __name__ == "__main__":
    main()
