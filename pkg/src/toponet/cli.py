"""Batch command-line client of the toponet service.

Commands marshal files into the service request models, execute them in
process by default (no server needed), and format responses as plain text.
A remote service can be targeted with --server.  Exit codes: 0 success,
2 usage error, 3 data error.
"""
from __future__ import annotations

import sys
from pathlib import Path
from typing import Optional

import click
import numpy as np

from . import io
from .diagrams import PersistenceDiagram
from .filtration import BettiCurve, GraphBarcode
from .networks import DataError
from .service import models as m
from .service.app import (handle_apf, handle_betti, handle_distance,
                          handle_entropy, handle_image, handle_ks_infer,
                          handle_landscape, handle_morse, handle_pairwise,
                          handle_pd, handle_pd_reg, handle_permutation,
                          handle_regress, handle_rips, handle_top_loss,
                          handle_witness)
from .summaries import ImageGrid, PersistenceImage

DATA_ERROR_EXIT = 3

_HANDLERS = {
    "/betti": (handle_betti, m.BettiResponse),
    "/pd": (handle_pd, m.PdResponse),
    "/morse": (handle_morse, m.DiagramPayload),
    "/summary/apf": (handle_apf, m.ValueResponse),
    "/summary/entropy": (handle_entropy, m.ValueResponse),
    "/summary/landscape": (handle_landscape, m.LandscapeResponse),
    "/summary/image": (handle_image, m.ImageResponse),
    "/distance": (handle_distance, m.ValueResponse),
    "/distance/matrix": (handle_pairwise, m.PairwiseDistanceResponse),
    "/inference/ks": (handle_ks_infer, m.ValueResponse),
    "/inference/permutation": (handle_permutation, m.PermutationResponse),
    "/loss/top": (handle_top_loss, m.ValueResponse),
    "/loss/pdreg": (handle_pd_reg, m.ValueResponse),
    "/regress": (handle_regress, m.RegressResponse),
    "/complex/rips": (handle_rips, m.ComplexResponse),
    "/complex/witness": (handle_witness, m.ComplexResponse),
}


def call_service(ctx: click.Context, path: str, request) -> object:
    """Run a service request in process, or POST it to --server if given."""
    handler, response_model = _HANDLERS[path]
    server = ctx.obj.get("server")
    if not server:
        return handler(request)
    import httpx

    resp = httpx.post(server.rstrip("/") + path, json=request.model_dump(),
                      timeout=600.0)
    if resp.status_code == 422:
        detail = resp.json().get("detail", resp.text)
        raise DataError(str(detail))
    resp.raise_for_status()
    return response_model.model_validate(resp.json())


def _emit(ctx: click.Context, text: str):
    out = ctx.obj.get("output")
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _load_network_payload(path: str, fmt_name: str, convention: str) -> m.NetworkPayload:
    net = io.read_network(path, fmt_name, convention)
    return m.NetworkPayload(weights=[[float(v) for v in row] for row in net.weights],
                            convention=convention)


def _diagram_payload_from_file(path: str) -> m.DiagramPayload:
    pd = io.read_diagram(path)
    return m.DiagramPayload(dim=pd.dim, points=[(float(b), float(d)) for b, d in pd.points])


class _Cli(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except DataError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(DATA_ERROR_EXIT)


@click.group(cls=_Cli, context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--convention", type=click.Choice(["above", "below"]), default="above",
              show_default=True, help="Threshold direction for filtrations.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for every randomized step.")
@click.option("--server", default=None, metavar="URL",
              help="Base URL of a running toponet service; default runs in process.")
@click.option("--output", "-o", default=None, metavar="PATH",
              help="Write the result here instead of stdout.")
@click.version_option()
@click.pass_context
def main(ctx, convention, seed, server, output):
    """Topological representations, distances and inference for weighted networks.

    Internal worker threads are capped by the TOPONET_THREADS environment
    variable.  Identical inputs, flags and seed produce byte-identical output.
    """
    ctx.obj = {"convention": convention, "seed": seed, "server": server,
               "output": output}


_network_format = click.option("--format", "fmt_name",
                               type=click.Choice(["dense", "edgelist"]),
                               default="dense", show_default=True)
_weight_convention = click.option("--weights",
                                  type=click.Choice(["similarity", "dissimilarity"]),
                                  default="similarity", show_default=True,
                                  help="Meaning of the stored edge weights.")


@main.command()
@click.argument("network", type=click.Path(exists=True, dir_okay=False))
@click.option("--dim", type=click.Choice(["0", "1"]), default="0", show_default=True)
@click.option("--grid", type=int, default=None,
              help="Sample the curve on this many evenly spaced thresholds.")
@_network_format
@_weight_convention
@click.pass_context
def betti(ctx, network, dim, grid, fmt_name, weights):
    """Betti curve of the graph filtration of NETWORK."""
    req = m.BettiRequest(network=_load_network_payload(network, fmt_name, weights),
                         dim=int(dim), convention=ctx.obj["convention"])
    resp = call_service(ctx, "/betti", req)
    curve = BettiCurve(resp.dim, np.asarray(resp.breakpoints),
                       np.asarray(resp.values), resp.side)
    grid_values = None
    if grid is not None:
        hi = float(curve.breakpoints[-1]) if curve.breakpoints.size else 1.0
        grid_values = np.linspace(0.0, hi, grid)
    _emit(ctx, io.betti_curve_text(curve, grid_values))


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--dim", type=click.Choice(["0", "1", "both"]), default="both",
              show_default=True)
@click.option("--death-level", type=float, default=None,
              help="Common death value for classes that never die.")
@click.option("--kind", type=click.Choice(["graph", "morse"]), default="graph",
              show_default=True, help="Graph filtration of a network, or "
              "sublevel pairing of a 1-d signal.")
@click.option("--barcode", "as_barcode", is_flag=True,
              help="Emit the birth/death weight partition instead of diagrams.")
@_network_format
@_weight_convention
@click.pass_context
def pd(ctx, source, dim, death_level, kind, as_barcode, fmt_name, weights):
    """Persistence diagram / barcode of SOURCE."""
    if kind == "morse":
        samples = io.read_signal(source)
        resp = call_service(ctx, "/morse", m.MorseRequest(samples=list(samples)))
        diag = PersistenceDiagram(resp.dim, np.asarray(resp.points, dtype=float).reshape(-1, 2))
        _emit(ctx, io.diagram_text(diag))
        return
    req = m.PdRequest(network=_load_network_payload(source, fmt_name, weights),
                      death_level=death_level, convention=ctx.obj["convention"])
    resp = call_service(ctx, "/pd", req)
    if as_barcode:
        bc = GraphBarcode(np.asarray(resp.births0), np.asarray(resp.deaths1),
                          resp.death_level, resp.p, resp.n_components,
                          ctx.obj["convention"])
        _emit(ctx, io.barcode_result_text(bc))
        return
    out = []
    for payload in resp.diagrams:
        if dim != "both" and payload.dim != int(dim):
            continue
        diag = PersistenceDiagram(payload.dim,
                                  np.asarray(payload.points, dtype=float).reshape(-1, 2))
        out.append(io.diagram_text(diag))
    _emit(ctx, "".join(out))


@main.command()
@click.argument("kind", type=click.Choice(["apf", "entropy", "landscape", "image"]))
@click.argument("barcode", type=click.Path(exists=True, dir_okay=False))
@click.option("--t", type=float, default=None, help="apf: accumulate centers up to t.")
@click.option("--k", type=int, default=1, show_default=True, help="landscape order.")
@click.option("--eps", type=float, default=None, help="landscape: single location.")
@click.option("--grid", default=None, metavar="START:STOP:N",
              help="landscape: sample locations.")
@click.option("--image-grid", default=None, metavar="XMIN:XMAX:NX,YMIN:YMAX:NY",
              help="image: integration grid.")
@click.option("--sigma", type=float, default=0.1, show_default=True)
@click.option("--weight", type=click.Choice(["uniform", "linear", "exponential"]),
              default="uniform", show_default=True)
@click.option("--normalize", is_flag=True, help="image: scale weights to unit mass.")
@click.pass_context
def summary(ctx, kind, barcode, t, k, eps, grid, image_grid, sigma, weight, normalize):
    """Barcode summaries: apf | entropy | landscape | image."""
    payload = _diagram_payload_from_file(barcode)
    if kind == "apf":
        if t is None:
            raise click.UsageError("apf needs --t")
        resp = call_service(ctx, "/summary/apf", m.ApfRequest(barcode=payload, t=t))
        _emit(ctx, io.fmt(resp.value) + "\n")
    elif kind == "entropy":
        resp = call_service(ctx, "/summary/entropy", m.EntropyRequest(barcode=payload))
        _emit(ctx, io.fmt(resp.value) + "\n")
    elif kind == "landscape":
        grid_list = None
        if grid is not None:
            try:
                start, stop, num = grid.split(":")
                grid_list = list(np.linspace(float(start), float(stop), int(num)))
            except ValueError:
                raise click.UsageError("landscape grid must be START:STOP:N")
        req = m.LandscapeRequest(barcode=payload, k=k, eps=eps, grid=grid_list)
        resp = call_service(ctx, "/summary/landscape", req)
        _emit(ctx, "\n".join(io.fmt(v) for v in resp.values) + "\n")
    else:
        if image_grid is None:
            raise click.UsageError("image needs --image-grid XMIN:XMAX:NX,YMIN:YMAX:NY")
        try:
            xs, ys = image_grid.split(",")
            xmin, xmax, nx = xs.split(":")
            ymin, ymax, ny = ys.split(":")
            gp = m.GridPayload(xmin=float(xmin), xmax=float(xmax), nx=int(nx),
                               ymin=float(ymin), ymax=float(ymax), ny=int(ny))
        except ValueError:
            raise click.UsageError("image grid must be XMIN:XMAX:NX,YMIN:YMAX:NY")
        req = m.ImageRequest(diagram=payload, grid=gp, sigma=sigma, weight=weight,
                             normalize=normalize)
        resp = call_service(ctx, "/summary/image", req)
        img = PersistenceImage(
            ImageGrid(gp.xmin, gp.xmax, gp.nx, gp.ymin, gp.ymax, gp.ny),
            resp.sigma, resp.weight, np.asarray(resp.pixels))
        _emit(ctx, io.image_text(img))


@main.command()
@click.argument("inputs", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--method", required=True,
              type=click.Choice(["lp", "logeuclid", "gh", "bottleneck",
                                 "wasserstein", "ks"]))
@click.option("--dim", type=click.Choice(["0", "1"]), default="0", show_default=True)
@click.option("--l", "order", type=float, default=2.0, show_default=True,
              help="lp: norm order (use inf for the max norm).")
@click.option("--q", type=float, default=2.0, show_default=True,
              help="wasserstein: matching power.")
@click.option("--alpha", type=float, default=None, help="logeuclid: ridge.")
@click.option("--input", "input_kind", type=click.Choice(["network", "diagram"]),
              default="network", show_default=True)
@_network_format
@_weight_convention
@click.pass_context
def dist(ctx, inputs, method, dim, order, q, alpha, input_kind, fmt_name, weights):
    """Distance between two networks or diagram files; three or more network
    files produce the labeled pairwise distance matrix."""
    if len(inputs) < 2:
        raise click.UsageError("dist needs at least two input files")
    if len(inputs) > 2:
        if input_kind == "diagram":
            raise click.UsageError("pairwise matrices take network inputs")
        req = m.PairwiseDistanceRequest(
            method=method,
            networks=[_load_network_payload(f, fmt_name, weights) for f in inputs],
            dim=int(dim), order=order, q=q, convention=ctx.obj["convention"])
        resp = call_service(ctx, "/distance/matrix", req)
        labels = [Path(f).name for f in inputs]
        _emit(ctx, io.distance_matrix_text(labels, np.asarray(resp.matrix)))
        return
    a, b = inputs
    if input_kind == "diagram":
        if method not in ("bottleneck", "wasserstein"):
            raise click.UsageError("--input diagram only fits matching distances")
        req = m.DistanceRequest(method=method,
                                diagrams=[_diagram_payload_from_file(a),
                                          _diagram_payload_from_file(b)],
                                dim=int(dim), order=order, q=q, alpha=alpha,
                                convention=ctx.obj["convention"])
    else:
        req = m.DistanceRequest(method=method,
                                networks=[_load_network_payload(a, fmt_name, weights),
                                          _load_network_payload(b, fmt_name, weights)],
                                dim=int(dim), order=order, q=q, alpha=alpha,
                                convention=ctx.obj["convention"])
    resp = call_service(ctx, "/distance", req)
    _emit(ctx, io.fmt(resp.value) + "\n")


@main.command()
@click.argument("mode", type=click.Choice(["ks", "perm"]))
@click.option("--Dq", "dq", type=float, default=None, help="ks: observed statistic.")
@click.option("--q", type=int, default=None, help="ks: number of filtration values.")
@click.option("--pvalue-mode", type=click.Choice(["continuous", "paper_integer"]),
              default="continuous", show_default=True)
@click.option("--group1", "-1", "group1", multiple=True,
              type=click.Path(exists=True, dir_okay=False), help="perm: group 1 files.")
@click.option("--group2", "-2", "group2", multiple=True,
              type=click.Path(exists=True, dir_okay=False), help="perm: group 2 files.")
@click.option("--method", type=click.Choice(["lp", "logeuclid", "gh", "bottleneck",
                                              "wasserstein", "ks"]),
              default="ks", show_default=True)
@click.option("--dim", type=click.Choice(["0", "1"]), default="0", show_default=True)
@click.option("--n-perm", type=int, default=999, show_default=True)
@_network_format
@_weight_convention
@click.pass_context
def infer(ctx, mode, dq, q, pvalue_mode, group1, group2, method, dim, n_perm,
          fmt_name, weights):
    """Exact KS p-value series, or a permutation test on group distance."""
    if mode == "ks":
        if dq is None or q is None:
            raise click.UsageError("infer ks needs --Dq and --q")
        resp = call_service(ctx, "/inference/ks",
                            m.KsInferRequest(dq=dq, q=q, mode=pvalue_mode))
        _emit(ctx, io.fmt(resp.value) + "\n")
        return
    if not group1 or not group2:
        raise click.UsageError("infer perm needs --group1 and --group2 files")
    req = m.PermutationRequest(
        group1=[_load_network_payload(f, fmt_name, weights) for f in group1],
        group2=[_load_network_payload(f, fmt_name, weights) for f in group2],
        method=method, dim=int(dim), convention=ctx.obj["convention"],
        n_perm=n_perm, seed=ctx.obj["seed"])
    resp = call_service(ctx, "/inference/permutation", req)
    _emit(ctx, io.inference_result_text(resp.observed, resp.p, resp.n_perm,
                                        resp.seed, resp.null_quantiles))


@main.command()
@click.argument("mode", type=click.Choice(["top", "pdreg"]))
@click.argument("inputs", nargs=-1, type=click.Path(exists=True, dir_okay=False))
@click.option("--p", type=float, default=1.0, show_default=True,
              help="pdreg: persistence power.")
@click.option("--q", type=float, default=0.0, show_default=True,
              help="pdreg: midlife power.")
@click.option("--i0", type=int, default=1, show_default=True,
              help="pdreg: first penalized rank.")
@_network_format
@_weight_convention
@click.pass_context
def loss(ctx, mode, inputs, p, q, i0, fmt_name, weights):
    """Topological losses: top (two networks) | pdreg (one diagram)."""
    if mode == "top":
        if len(inputs) != 2:
            raise click.UsageError("loss top needs exactly two network files")
        req = m.TopLossRequest(network1=_load_network_payload(inputs[0], fmt_name, weights),
                               network2=_load_network_payload(inputs[1], fmt_name, weights))
        resp = call_service(ctx, "/loss/top", req)
    else:
        if len(inputs) != 1:
            raise click.UsageError("loss pdreg needs exactly one diagram file")
        req = m.PdRegRequest(diagram=_diagram_payload_from_file(inputs[0]),
                             p=p, q=q, i0=i0)
        resp = call_service(ctx, "/loss/pdreg", req)
    _emit(ctx, io.fmt(resp.value) + "\n")


@main.command()
@click.argument("observations", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--prior", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--lam", type=float, default=0.0, show_default=True)
@click.option("--max-iter", type=int, default=200, show_default=True)
@click.option("--step", type=float, default=None, help="Initial step size.")
@click.option("--trace-out", default=None, metavar="PATH",
              help="Write the per-iteration loss log here.")
@_network_format
@_weight_convention
@click.pass_context
def regress(ctx, observations, prior, lam, max_iter, step, trace_out, fmt_name, weights):
    """Topologically penalized network regression."""
    req = m.RegressRequest(
        observations=[_load_network_payload(f, fmt_name, weights) for f in observations],
        prior=_load_network_payload(prior, fmt_name, weights),
        lam=lam, max_iter=max_iter, step_size=step)
    resp = call_service(ctx, "/regress", req)
    lines = [",".join(io.fmt(v) for v in row) for row in resp.weights]
    _emit(ctx, "\n".join(lines) + "\n")
    if trace_out:
        log = "\n".join(f"{i},{io.fmt(v)}" for i, v in enumerate(resp.trace))
        Path(trace_out).write_text(log + "\n")
    if not resp.converged:
        click.echo("warning: iteration budget exhausted before convergence", err=True)


@main.command(name="complex")
@click.argument("mode", type=click.Choice(["rips", "witness"]))
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--eps", type=float, required=True)
@click.option("--max-dim", type=int, default=2, show_default=True)
@click.option("--input", "input_kind", type=click.Choice(["cloud", "network"]),
              default="cloud", show_default=True, help="rips: source kind.")
@click.option("--landmarks", type=int, default=None,
              help="witness: number of maxmin landmarks.")
@click.option("--betti/--no-betti", default=True, show_default=True,
              help="Append Betti numbers as a trailing comment line.")
@_weight_convention
@click.pass_context
def complex_cmd(ctx, mode, source, eps, max_dim, input_kind, landmarks, betti, weights):
    """Rips or witness complex of a point cloud (or network)."""
    if mode == "rips":
        if input_kind == "network":
            req = m.RipsRequest(network=_load_network_payload(source, "dense", weights),
                                eps=eps, max_dim=max_dim, betti=betti)
        else:
            cloud = io.read_point_cloud(source)
            req = m.RipsRequest(points=[[float(v) for v in row] for row in cloud.points],
                                eps=eps, max_dim=max_dim, betti=betti)
        resp = call_service(ctx, "/complex/rips", req)
    else:
        cloud = io.read_point_cloud(source)
        req = m.WitnessRequest(points=[[float(v) for v in row] for row in cloud.points],
                               eps=eps, max_dim=max_dim, landmark_count=landmarks,
                               seed=ctx.obj["seed"], betti=betti)
        resp = call_service(ctx, "/complex/witness", req)
    lines = [f"{s.dim},{' '.join(str(v) for v in s.vertices)},{io.fmt(s.time)}"
             for s in resp.simplices]
    text = "\n".join(lines) + ("\n" if lines else "")
    if betti and resp.betti is not None:
        text += "# betti," + ",".join(str(b) for b in resp.betti) + "\n"
    _emit(ctx, text)


if __name__ == "__main__":
    main()
