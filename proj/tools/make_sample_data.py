#!/usr/bin/env python3
# Copyright 2026 The svsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the bundled sample videos, retention curves and manifest.

Usage: make_sample_data.py [--out data/sample] [--svsim build/tools/svsim]

Chunk sizes are lognormal around the nominal bitrate and rescaled so each
level's mean chunk size matches it exactly. Retention curves follow
f(s) = q + (1 - q) * exp(-s / tau). With --svsim, also writes 12 synthetic
network traces (four per bandwidth regime) and a small evaluation config.
"""

import argparse
import json
import math
import pathlib
import subprocess

import numpy as np

LADDER_KBPS = (750, 1200, 1850)

# name, length in seconds, full-watch floor q, decay constant tau (s)
VIDEOS = [
    ("tj", 17, 0.45, 6.0),
    ("EDG", 26, 0.35, 8.0),
    ("gy", 37, 0.30, 10.0),
    ("dx", 40, 0.30, 10.0),
    ("ss", 47, 0.25, 12.0),
    ("jt", 6, 0.60, 3.0),
    ("yd", 125, 0.15, 20.0),
]

EXAMPLE_CURVE = "0 1\n1 0.9298\n2 0.8324\n3 0.7298\n4 0\n"

EVALUATE_CONFIG = """\
# Small evaluation over the bundled sample data.
[evaluation]
seed = 2024
user_samples = 5
baseline = no_prefetch
thresholds = 1.5,3
normalization = anchored

[inputs]
network_dirs = network
manifests = manifest.json

[qoe]
alpha = 1
beta = 1.85
gamma = 1
theta = 0.5

[algorithm.no_prefetch]

[algorithm.fixed_prefetch]
prefetch_chunks = 2
level = 1

[algorithm.threshold]
low_buffer_ms = 1000
high_buffer_ms = 4000

[algorithm.oracle]
"""


def chunk_sizes(rng, chunks, kbps):
    nominal = kbps * 1000 / 8
    raw = rng.lognormal(mean=0.0, sigma=0.25, size=chunks)
    sizes = np.round(raw / raw.mean() * nominal).astype(np.int64)
    # Push the rounding residue into the largest chunk so the mean is exact.
    sizes[np.argmax(sizes)] += int(round(nominal * chunks)) - int(sizes.sum())
    return sizes


def retention_text(length_s, q, tau):
    lines = ["0 1"]
    previous = 1.0
    for s in range(1, length_s + 1):
        f = round(q + (1 - q) * math.exp(-s / tau), 4)
        f = min(f, previous)
        previous = f
        lines.append(f"{s} {f:.4f}")
    lines.append(f"{length_s + 1} 0")
    return "\n".join(lines) + "\n"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    root = pathlib.Path(__file__).resolve().parent.parent
    parser.add_argument("--out", default=str(root / "data" / "sample"))
    parser.add_argument("--svsim", default=None)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    out = pathlib.Path(args.out)
    (out / "videos").mkdir(parents=True, exist_ok=True)
    (out / "retention").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    manifest = {"sequence": "sample7", "videos": []}
    for name, length_s, q, tau in VIDEOS:
        sizes = []
        for kbps in LADDER_KBPS:
            path = f"videos/{name}_{kbps}.txt"
            values = chunk_sizes(rng, length_s, kbps)
            (out / path).write_text("".join(f"{v}\n" for v in values))
            sizes.append(path)
        retention = f"retention/{name}.txt"
        (out / retention).write_text(retention_text(length_s, q, tau))
        manifest["videos"].append({
            "name": name,
            "duration_ms": length_s * 1000,
            "retention": retention,
            "bitrates_kbps": list(LADDER_KBPS),
            "sizes": sizes,
        })
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    (out / "retention" / "example_3s.txt").write_text(EXAMPLE_CURVE)

    if args.svsim:
        # Four traces per bandwidth regime.
        regimes = [("low", 11, "0.2", "2.2"), ("mid", 12, "1.0", "3.5"),
                   ("high", 13, "2.5", "5.0")]
        for prefix, seed, lo, hi in regimes:
            subprocess.run([args.svsim, "gen-net", "--count", "4",
                            "--seed", str(seed), "--prefix", prefix,
                            "--min-bw", lo, "--max-bw", hi,
                            "--out", str(out / "network")], check=True)
        (out / "evaluate.ini").write_text(EVALUATE_CONFIG)


if __name__ == "__main__":
    main()
