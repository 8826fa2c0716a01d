"""Build the bindings-parity fixtures: a 20-network corpus plus the literal
CLI output for every bound function, parsed into exact float64 values.

Run from anywhere; writes frontend/tests/fixtures/expected.json.
"""
from __future__ import annotations

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from toponet import corr_to_weight, graph_barcode, io

HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "tests" / "fixtures"
CORPUS_SIZE = 20


def run_cli(*args: str) -> str:
    res = subprocess.run([sys.executable, "-m", "toponet.cli", *args],
                         capture_output=True, text=True, check=True)
    return res.stdout


def make_corpus(workdir: Path):
    networks = []
    files = []
    for k in range(CORPUS_SIZE):
        rng = np.random.default_rng(1_000 + k)
        p = 6
        iu = np.triu_indices(p, 1)
        w = np.zeros((p, p))
        w[iu] = rng.uniform(0.05, 1.0, iu[0].size)
        w = w + w.T
        path = workdir / f"net{k:02d}.csv"
        from toponet import WeightedNetwork

        net = WeightedNetwork(w)
        io.write_dense_network(path, net)
        networks.append(io.read_dense_network(path))  # exactly what the CLI reads
        files.append(path)
    return networks, files


def parse_betti(text: str):
    eps, vals = io.read_betti_curve_text(text)
    return {"breakpoints": [float(v) for v in eps[1:]],
            "values": [int(v) for v in vals]}


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    out: dict = {}
    with tempfile.TemporaryDirectory() as tmp:
        workdir = Path(tmp)
        networks, files = make_corpus(workdir)
        out["networks"] = [[[float(v) for v in row] for row in n.weights]
                           for n in networks]

        out["betti"] = []
        out["barcode"] = []
        for idx, path in enumerate(files):
            for dim in (0, 1):
                curve = parse_betti(run_cli("betti", str(path), "--dim", str(dim)))
                out["betti"].append({"net": idx, "dim": dim, **curve})
            bc = json.loads(run_cli("pd", str(path), "--barcode"))
            out["barcode"].append({"net": idx, **bc})

        pairs = [(k, (k + 1) % CORPUS_SIZE) for k in range(CORPUS_SIZE)]
        out["pairs"] = [list(p) for p in pairs]
        out["distances"] = []
        for a, b in pairs:
            same_p = networks[a].p == networks[b].p
            entry = {"pair": [a, b]}
            entry["ks0"] = float(run_cli("dist", "--method", "ks", "--dim", "0",
                                         str(files[a]), str(files[b]))) if same_p else None
            entry["gh"] = float(run_cli("dist", "--method", "gh",
                                        str(files[a]), str(files[b]))) if same_p else None
            entry["bottleneck"] = float(run_cli("dist", "--method", "bottleneck",
                                                "--dim", "0",
                                                str(files[a]), str(files[b])))
            entry["wasserstein_q2"] = float(run_cli("dist", "--method", "wasserstein",
                                                    "--dim", "0", "--q", "2",
                                                    str(files[a]), str(files[b])))
            entry["top_loss"] = float(run_cli("loss", "top",
                                              str(files[a]), str(files[b])))
            out["distances"].append(entry)

        # shared death level the dist command used for the matching methods
        out["death_levels"] = []
        for a, b in pairs:
            weights = np.concatenate([networks[a].edge_weights(),
                                      networks[b].edge_weights()])
            from toponet import default_death_level

            out["death_levels"].append(default_death_level(weights))

        out["ks_pvalue"] = []
        for dq, q in ((8.0, 8), (1.0, 2), (3.5, 5), (0.0, 3)):
            p = float(run_cli("infer", "ks", "--Dq", str(dq), "--q", str(q)))
            out["ks_pvalue"].append({"dq": dq, "q": q, "p": p})

        # permutation test over two corpus subsets with a common node count
        by_p: dict[int, list[int]] = {}
        for idx, n in enumerate(networks):
            by_p.setdefault(n.p, []).append(idx)
        group_pool = max(by_p.values(), key=len)
        half = len(group_pool) // 2
        g1, g2 = group_pool[:half], group_pool[half:2 * half]
        perm_out = json.loads(run_cli(
            "--seed", "11", "infer", "perm",
            *[arg for idx in g1 for arg in ("-1", str(files[idx]))],
            *[arg for idx in g2 for arg in ("-2", str(files[idx]))],
            "--n-perm", "199"))
        out["permutation"] = {"group1": g1, "group2": g2, "n_perm": 199,
                              "seed": 11, **perm_out}

        # summaries over barcodes derived from the corpus
        out["summaries"] = []
        for idx in range(0, CORPUS_SIZE, 4):
            bc = graph_barcode(networks[idx])
            bars = [[float(b), float(bc.death_level)] for b in bc.births0]
            pd_file = workdir / f"bars{idx:02d}.json"
            pd_file.write_text(json.dumps({"dim": 0, "points": bars}))
            entry = {"bars": bars}
            entry["entropy"] = float(run_cli("summary", "entropy", str(pd_file)))
            entry["apf_t"] = float(np.median([b for b, _ in bars]))
            entry["apf"] = float(run_cli("summary", "apf", str(pd_file),
                                         "--t", io.fmt(entry["apf_t"])))
            entry["landscape_k"] = 2
            entry["landscape_eps"] = float(np.mean([b for b, _ in bars]))
            entry["landscape"] = float(run_cli(
                "summary", "landscape", str(pd_file), "--k", "2",
                "--eps", io.fmt(entry["landscape_eps"])))
            grid = {"xmin": 0.0, "xmax": 1.1, "nx": 6,
                    "ymin": 0.0, "ymax": 1.3, "ny": 5}
            sigma = 0.08
            img_text = run_cli("summary", "image", str(pd_file),
                               "--sigma", io.fmt(sigma), "--weight", "linear",
                               "--image-grid",
                               f"{grid['xmin']}:{grid['xmax']}:{grid['nx']},"
                               f"{grid['ymin']}:{grid['ymax']}:{grid['ny']}")
            img = io.parse_image(img_text)
            entry["image"] = {"grid": grid, "sigma": sigma, "weight": "linear",
                              "pixels": [[float(v) for v in row] for row in img.pixels]}
            out["summaries"].append(entry)

        # corr_to_weight has no CLI route; expected values come from the core
        # library directly (see the decisions ledger)
        out["correlations"] = []
        for k in range(4):
            rng = np.random.default_rng(9_000 + k)
            data = rng.normal(size=(30, 5))
            corr = np.corrcoef(data, rowvar=False)
            net = corr_to_weight(corr)
            out["correlations"].append({
                "corr": [[float(v) for v in row] for row in corr],
                "weights": [[float(v) for v in row] for row in net.weights],
            })

    (FIXTURES / "expected.json").write_text(json.dumps(out))
    print(f"wrote {FIXTURES / 'expected.json'}")


if __name__ == "__main__":
    main()
