"""Drive the staged pipeline programmatically and inspect its emissions.

``run_experiment`` chains the same stages the ``conical-fronts`` command
line exposes (validate, solve-planar, solve-pulsating, build-barriers,
evolve, verify); each verb runs the chain up to and including that stage.
This demo runs the cheap ``solve-planar`` prefix, prints the stage table
and recorded speeds, and lists the files written to the output directory.

The bundled configurations under ``src/conical_fronts/configs/`` drive the
full-size experiments; pass one to ``--config`` (or to ``config_from_dict``)
and use ``run-all`` for the complete chain.  Equivalent shell invocation:

    conical-fronts solve-planar --out /tmp/demo_run

Run:  python3 demos/run_experiment_manifest.py     (a few seconds)
"""

import json
import math
import pathlib
import tempfile

from conical_fronts.config import config_from_dict
from conical_fronts.pipeline import run_experiment, stages_for_verb


def main() -> None:
    config = config_from_dict({"problem": {"alphas": [math.pi / 2]}})
    print(f"stage chain for run-all: {', '.join(stages_for_verb('run-all'))}")
    print(f"stage chain for solve-planar: "
          f"{', '.join(stages_for_verb('solve-planar'))}")

    out_dir = pathlib.Path(tempfile.mkdtemp(prefix="conical_demo_"))
    manifest = run_experiment(config, verb="solve-planar", out_dir=out_dir)

    print("\nstages:")
    for stage in manifest.stages:
        print(f"  {stage['name']:<16} {stage['status']:<8} "
              f"{stage['seconds']:.2f} s")
    print("speeds:")
    for row in manifest.speeds:
        print(f"  {row['name']:<20} c = {row['c']:.10f} "
              f"(bracket {row['bracket']:.1e}, {row['method']})")
    print(f"summary: passed = {manifest.summary['passed']}, "
          f"{manifest.summary['checks_passed']}/"
          f"{manifest.summary['checks_total']} checks")

    print(f"\nfiles under {out_dir}:")
    for path in sorted(out_dir.rglob("*")):
        if path.is_file():
            print(f"  {path.relative_to(out_dir)}  ({path.stat().st_size} bytes)")

    with open(out_dir / "manifest.json") as fh:
        on_disk = json.load(fh)
    print(f"\nmanifest.json keys: {sorted(on_disk)}")
    print(f"recorded numpy version: {on_disk['versions']['numpy']}")

    bundled = (pathlib.Path(__file__).parents[1] / "src" / "conical_fronts"
               / "configs")
    print(f"\nbundled full-size configurations ({bundled}):")
    for cfg_path in sorted(bundled.glob("*.json")):
        print(f"  {cfg_path.name}")


if __name__ == "__main__":
    main()
