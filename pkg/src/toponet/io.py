"""Text readers and writers for networks, curves, diagrams, images and results.

All floats are written with %.17g so round trips are lossless and repeated runs
are byte identical.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .diagrams import Barcode, PersistenceDiagram
from .filtration import BettiCurve, GraphBarcode
from .networks import DataError, Hypergraph, PointCloud, WeightedNetwork
from .simplicial import FilteredComplex, SimplicialComplex
from .summaries import ImageGrid, PersistenceImage

PathLike = Union[str, Path]


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _read_lines(path: PathLike) -> list[str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}")
    return [ln for ln in text.splitlines() if ln.strip()]


def _parse_float(token: str, path: PathLike, line: int, col: int) -> float:
    try:
        v = float(token)
    except ValueError:
        raise DataError(f"{path}:{line}:{col}: not a number: {token!r}")
    if math.isnan(v):
        raise DataError(f"{path}:{line}:{col}: NaN is not a valid value")
    return v


def read_dense_network(path: PathLike, convention: str = "similarity") -> WeightedNetwork:
    """Dense symmetric matrix: p comma-separated lines of p fields."""
    lines = _read_lines(path)
    if not lines:
        raise DataError(f"{path}: empty file")
    rows = []
    for ln_no, ln in enumerate(lines, start=1):
        fields = [f.strip() for f in ln.split(",")]
        rows.append([_parse_float(f, path, ln_no, c + 1) for c, f in enumerate(fields)])
    p = len(rows)
    if any(len(r) != p for r in rows):
        bad = next(i for i, r in enumerate(rows, start=1) if len(r) != p)
        raise DataError(f"{path}:{bad}: expected {p} fields per line")
    try:
        return WeightedNetwork(np.asarray(rows), convention)
    except DataError as exc:
        raise DataError(f"{path}: {exc}")


def write_dense_network(path: PathLike, net: WeightedNetwork):
    lines = [",".join(fmt(v) for v in row) for row in net.weights]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edgelist_network(path: PathLike, p: Optional[int] = None,
                          convention: str = "similarity") -> WeightedNetwork:
    """Tab-separated "i<TAB>j<TAB>w" edges with 0-based node indices."""
    lines = _read_lines(path)
    seen: dict[tuple[int, int], int] = {}
    edges = []
    max_node = -1
    for ln_no, ln in enumerate(lines, start=1):
        parts = ln.split("\t")
        if len(parts) != 3:
            raise DataError(f"{path}:{ln_no}: expected 'i<TAB>j<TAB>w'")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise DataError(f"{path}:{ln_no}: node indices must be integers")
        w = _parse_float(parts[2], path, ln_no, 3)
        if i < 0 or j < 0:
            raise DataError(f"{path}:{ln_no}: negative node index")
        if i == j:
            raise DataError(f"{path}:{ln_no}: self loop on node {i}")
        if w < 0:
            raise DataError(f"{path}:{ln_no}: negative edge weight")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DataError(
                f"{path}:{ln_no}: duplicate edge ({i}, {j}) first given on line {seen[key]}"
            )
        seen[key] = ln_no
        edges.append((i, j, w))
        max_node = max(max_node, i, j)
    size = p if p is not None else max_node + 1
    if size < 1:
        raise DataError(f"{path}: no nodes")
    if max_node >= size:
        raise DataError(f"{path}: node index {max_node} outside 0..{size - 1}")
    w = np.zeros((size, size))
    for i, j, val in edges:
        w[i, j] = w[j, i] = val
    return WeightedNetwork(w, convention)


def write_edgelist_network(path: PathLike, net: WeightedNetwork):
    ii, jj, ww = net.edge_arrays()
    lines = [f"{i}\t{j}\t{fmt(w)}" for i, j, w in zip(ii, jj, ww)]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def read_network(path: PathLike, fmt_name: str = "dense",
                 convention: str = "similarity", p: Optional[int] = None) -> WeightedNetwork:
    if fmt_name == "dense":
        return read_dense_network(path, convention)
    if fmt_name == "edgelist":
        return read_edgelist_network(path, p, convention)
    raise DataError(f"unknown network format {fmt_name!r}")


def read_incidence(path: PathLike) -> Hypergraph:
    """Comma-separated 0/1 incidence matrix, rows = vertices."""
    lines = _read_lines(path)
    rows = []
    for ln_no, ln in enumerate(lines, start=1):
        fields = [f.strip() for f in ln.split(",")]
        row = []
        for c, f in enumerate(fields, start=1):
            if f not in ("0", "1"):
                raise DataError(f"{path}:{ln_no}:{c}: incidence entries must be 0 or 1")
            row.append(int(f))
        rows.append(row)
    if not rows:
        raise DataError(f"{path}: empty file")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DataError(f"{path}: ragged rows")
    return Hypergraph(np.asarray(rows))


def write_incidence(path: PathLike, hg: Hypergraph):
    lines = [",".join(str(int(v)) for v in row) for row in hg.incidence]
    Path(path).write_text("\n".join(lines) + "\n")


def read_point_cloud(path: PathLike) -> PointCloud:
    """Comma-separated rows of coordinates, one point per line."""
    lines = _read_lines(path)
    rows = []
    for ln_no, ln in enumerate(lines, start=1):
        fields = [f.strip() for f in ln.split(",")]
        rows.append([_parse_float(f, path, ln_no, c + 1) for c, f in enumerate(fields)])
    if not rows:
        raise DataError(f"{path}: empty file")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DataError(f"{path}: ragged rows")
    return PointCloud(np.asarray(rows))


def write_point_cloud(path: PathLike, cloud: PointCloud):
    lines = [",".join(fmt(v) for v in row) for row in cloud.points]
    Path(path).write_text("\n".join(lines) + "\n")


def read_signal(path: PathLike) -> np.ndarray:
    """One sample value per line."""
    lines = _read_lines(path)
    return np.asarray([_parse_float(ln.strip(), path, i + 1, 1)
                       for i, ln in enumerate(lines)])


def betti_curve_text(curve: BettiCurve, grid: Optional[Sequence[float]] = None) -> str:
    """Two-column "epsilon,betti" text.

    Without a grid the exact step function is emitted: the value before the
    first breakpoint at epsilon 0, then the value attached to each breakpoint.
    """
    lines = []
    if grid is not None:
        for eps in grid:
            lines.append(f"{fmt(eps)},{int(curve.value_at(float(eps)))}")
    else:
        start = 0.0
        if curve.breakpoints.size and float(curve.breakpoints[0]) <= 0.0:
            start = float(curve.breakpoints[0]) - 1.0
        lines.append(f"{fmt(start)},{int(curve.values[0])}")
        for bp, val in zip(curve.breakpoints, curve.values[1:]):
            lines.append(f"{fmt(bp)},{int(val)}")
    return "\n".join(lines) + "\n"


def read_betti_curve_text(text: str) -> tuple[np.ndarray, np.ndarray]:
    eps, vals = [], []
    for ln_no, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip():
            continue
        parts = ln.split(",")
        if len(parts) != 2:
            raise DataError(f"line {ln_no}: expected 'epsilon,betti'")
        eps.append(float(parts[0]))
        vals.append(int(parts[1]))
    return np.asarray(eps), np.asarray(vals)


def diagram_text(pd: PersistenceDiagram) -> str:
    pts = ",".join(f"[{fmt(b)},{fmt(d)}]" for b, d in pd.points)
    return f'{{"dim":{pd.dim},"points":[{pts}]}}\n'


def parse_diagram(text: str) -> PersistenceDiagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"bad diagram JSON: {exc}")
    if not isinstance(obj, dict) or "points" not in obj:
        raise DataError('diagram JSON must look like {"dim":k,"points":[[b,d],...]}')
    pts = np.asarray(obj["points"], dtype=float).reshape(-1, 2)
    return PersistenceDiagram(int(obj.get("dim", 0)), pts)


def read_diagram(path: PathLike) -> PersistenceDiagram:
    return parse_diagram(Path(path).read_text())


def read_diagrams(path: PathLike) -> list[PersistenceDiagram]:
    """One JSON diagram object per line."""
    return [parse_diagram(ln) for ln in _read_lines(path)]


def read_barcode(path: PathLike) -> Barcode:
    return Barcode(read_diagram(path).points)


def image_text(img: PersistenceImage) -> str:
    g = img.grid
    header = ("# " + ",".join([
        f"xmin={fmt(g.xmin)}", f"xmax={fmt(g.xmax)}", f"nx={g.nx}",
        f"ymin={fmt(g.ymin)}", f"ymax={fmt(g.ymax)}", f"ny={g.ny}",
        f"sigma={fmt(img.sigma)}", f"weight={img.weight}",
    ]))
    lines = [header]
    for row in img.pixels:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_image(text: str) -> PersistenceImage:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# "):
        raise DataError("image text must start with a '# key=value,...' header")
    meta: dict[str, str] = {}
    for part in lines[0][2:].split(","):
        if "=" not in part:
            raise DataError(f"bad header field {part!r}")
        key, val = part.split("=", 1)
        meta[key.strip()] = val.strip()
    try:
        grid = ImageGrid(float(meta["xmin"]), float(meta["xmax"]), int(meta["nx"]),
                         float(meta["ymin"]), float(meta["ymax"]), int(meta["ny"]))
        sigma = float(meta["sigma"])
        weight = meta["weight"]
    except KeyError as exc:
        raise DataError(f"image header missing {exc}")
    pixels = np.asarray([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    if pixels.shape != (grid.ny, grid.nx):
        raise DataError(f"pixel block {pixels.shape} does not match grid "
                        f"({grid.ny}, {grid.nx})")
    return PersistenceImage(grid, sigma, weight, pixels)


def distance_matrix_text(labels: Sequence[str], matrix: np.ndarray) -> str:
    lines = [",".join(labels)]
    for row in np.asarray(matrix, dtype=float):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def complex_text(cx: Union[SimplicialComplex, FilteredComplex]) -> str:
    """Lines "dim,v0 v1 ...,time"; plain complexes get time 0."""
    if isinstance(cx, FilteredComplex):
        items = [(s, cx.times[frozenset(s)]) for s in cx.complex.all_simplices()]
    else:
        items = [(s, 0.0) for s in cx.all_simplices()]
    items.sort(key=lambda st: (st[1], len(st[0]), tuple(sorted(st[0]))))
    lines = [f"{len(s) - 1},{' '.join(str(v) for v in s)},{fmt(t)}" for s, t in items]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_complex(text: str) -> FilteredComplex:
    items = []
    for ln_no, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip() or ln.lstrip().startswith("#"):
            continue
        parts = ln.split(",")
        if len(parts) != 3:
            raise DataError(f"line {ln_no}: expected 'dim,vertices,time'")
        verts = tuple(int(v) for v in parts[1].split())
        if int(parts[0]) != len(verts) - 1:
            raise DataError(f"line {ln_no}: dimension does not match vertex count")
        items.append((verts, float(parts[2])))
    return FilteredComplex(items)


def inference_result_text(observed: float, p_value: float, n_perm: int, seed: int,
                          null_quantiles: dict[str, float]) -> str:
    nq = ",".join(f'"{k}":{fmt(v)}' for k, v in null_quantiles.items())
    return (f'{{"observed":{fmt(observed)},"p":{fmt(p_value)},"n_perm":{n_perm},'
            f'"seed":{seed},"null_quantiles":{{{nq}}}}}\n')


def barcode_result_text(bc: GraphBarcode) -> str:
    b0 = ",".join(fmt(v) for v in bc.births0)
    d1 = ",".join(fmt(v) for v in bc.deaths1)
    return (f'{{"births0":[{b0}],"deaths1":[{d1}],'
            f'"death_level":{fmt(bc.death_level)},"p":{bc.p},'
            f'"n_components":{bc.n_components}}}\n')
