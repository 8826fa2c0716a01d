"""HTTP facade over the core package.

Every endpoint body lives in a plain handler function taking and returning the
pydantic models, so the CLI can call the same code in-process without a
socket.
"""
from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..classical import log_euclidean_distance, matrix_norm_distance
from ..diagrams import Barcode, PersistenceDiagram
from ..filtration import MorseSignal, betti_curve, graph_barcode, morse_pairs_1d
from ..inference import (TwoSampleProblem, ks_pvalue, pairwise_distances,
                         permutation_test)
from ..networks import (DataError, PointCloud, WeightedNetwork,
                        corr_to_weight)
from ..simplicial import (betti_via_rank, maxmin_landmarks, rips_complex,
                          witness_complex)
from ..summaries import (ImageGrid, apf, entropy, landscape, landscape_curve,
                         persistence_image)
from ..distances import bottleneck, gh_distance, ks_distance, wasserstein
from ..topoloss import (RegressionProblem, pd_regularizer, top_loss,
                        topo_regression)
from . import models as m


def _network(payload: m.NetworkPayload) -> WeightedNetwork:
    return WeightedNetwork(np.asarray(payload.weights, dtype=float), payload.convention)


def _diagram(payload: m.DiagramPayload) -> PersistenceDiagram:
    pts = np.asarray(payload.points, dtype=float).reshape(-1, 2)
    return PersistenceDiagram(payload.dim, pts)


def _barcode(payload: m.DiagramPayload) -> Barcode:
    return Barcode(np.asarray(payload.points, dtype=float).reshape(-1, 2))


def _diagram_payload(pd: PersistenceDiagram) -> m.DiagramPayload:
    return m.DiagramPayload(dim=pd.dim, points=[(float(b), float(d)) for b, d in pd.points])


def handle_corr_to_weight(req: m.CorrelationRequest) -> m.NetworkPayload:
    net = corr_to_weight(np.asarray(req.corr, dtype=float))
    return m.NetworkPayload(weights=[[float(v) for v in row] for row in net.weights],
                            convention=net.convention)


def handle_betti(req: m.BettiRequest) -> m.BettiResponse:
    curve = betti_curve(_network(req.network), req.dim, req.convention)
    return m.BettiResponse(
        dim=curve.dim,
        breakpoints=[float(v) for v in curve.breakpoints],
        values=[int(v) for v in curve.values],
        side=curve.side,
    )


def handle_pd(req: m.PdRequest) -> m.PdResponse:
    bc = graph_barcode(_network(req.network), req.death_level, req.convention)
    return m.PdResponse(
        births0=[float(v) for v in bc.births0],
        deaths1=[float(v) for v in bc.deaths1],
        death_level=bc.death_level,
        p=bc.p,
        n_components=bc.n_components,
        diagrams=[_diagram_payload(bc.to_diagram(0)), _diagram_payload(bc.to_diagram(1))],
    )


def handle_morse(req: m.MorseRequest) -> m.DiagramPayload:
    return _diagram_payload(morse_pairs_1d(MorseSignal(np.asarray(req.samples))))


def handle_apf(req: m.ApfRequest) -> m.ValueResponse:
    return m.ValueResponse(value=apf(_barcode(req.barcode), req.t))


def handle_entropy(req: m.EntropyRequest) -> m.ValueResponse:
    return m.ValueResponse(value=entropy(_barcode(req.barcode)))


def handle_landscape(req: m.LandscapeRequest) -> m.LandscapeResponse:
    bc = _barcode(req.barcode)
    if (req.eps is None) == (req.grid is None):
        raise DataError("give exactly one of eps or grid")
    if req.eps is not None:
        return m.LandscapeResponse(values=[landscape(bc, req.k, req.eps)])
    vals = landscape_curve(bc, req.k, np.asarray(req.grid, dtype=float))
    return m.LandscapeResponse(values=[float(v) for v in vals])


def handle_image(req: m.ImageRequest) -> m.ImageResponse:
    grid = ImageGrid(req.grid.xmin, req.grid.xmax, req.grid.nx,
                     req.grid.ymin, req.grid.ymax, req.grid.ny)
    img = persistence_image(_diagram(req.diagram), grid, req.sigma,
                            req.weight, req.normalize)
    return m.ImageResponse(grid=req.grid, sigma=img.sigma, weight=img.weight,
                           pixels=[[float(v) for v in row] for row in img.pixels])


def _graph_diagrams(n1: WeightedNetwork, n2: WeightedNetwork, dim: int,
                    convention: str) -> tuple[PersistenceDiagram, PersistenceDiagram]:
    """Graph-filtration diagrams of a pair, sharing one death level."""
    w = np.concatenate([n1.edge_weights(), n2.edge_weights()])
    from ..filtration import default_death_level

    c = default_death_level(w)
    return (graph_barcode(n1, c, convention).to_diagram(dim),
            graph_barcode(n2, c, convention).to_diagram(dim))


def handle_distance(req: m.DistanceRequest) -> m.ValueResponse:
    if req.method in ("lp", "logeuclid", "gh", "ks"):
        if not req.networks or len(req.networks) != 2:
            raise DataError(f"method {req.method} needs exactly two networks")
        n1, n2 = (_network(x) for x in req.networks)
        if req.method == "lp":
            value = matrix_norm_distance(n1, n2, req.order)
        elif req.method == "logeuclid":
            value = log_euclidean_distance(n1.weights, n2.weights, req.alpha)
        elif req.method == "gh":
            value = gh_distance(n1, n2)
        else:
            value = ks_distance(n1, n2, req.dim, req.convention)
        return m.ValueResponse(value=value)
    # matching distances accept diagrams directly or build them from networks
    if req.diagrams is not None:
        if len(req.diagrams) != 2:
            raise DataError(f"method {req.method} needs exactly two diagrams")
        d1, d2 = (_diagram(x) for x in req.diagrams)
    elif req.networks is not None and len(req.networks) == 2:
        n1, n2 = (_network(x) for x in req.networks)
        d1, d2 = _graph_diagrams(n1, n2, req.dim, req.convention)
    else:
        raise DataError(f"method {req.method} needs two diagrams or two networks")
    if req.method == "bottleneck":
        return m.ValueResponse(value=bottleneck(d1, d2))
    return m.ValueResponse(value=wasserstein(d1, d2, req.q))


def handle_pairwise(req: m.PairwiseDistanceRequest) -> m.PairwiseDistanceResponse:
    if len(req.networks) < 2:
        raise DataError("pairwise distances need at least two networks")
    fn = _distance_fn(req.method, req.dim, req.order, req.q, req.convention)
    nets = [_network(x) for x in req.networks]
    mat = pairwise_distances(nets, fn)
    return m.PairwiseDistanceResponse(matrix=[[float(v) for v in row] for row in mat])


def handle_ks_infer(req: m.KsInferRequest) -> m.ValueResponse:
    return m.ValueResponse(value=ks_pvalue(req.dq, req.q, req.mode))


def _distance_fn(method: str, dim: int, order: float, q: float, convention: str):
    if method == "lp":
        return lambda a, b: matrix_norm_distance(a, b, order)
    if method == "logeuclid":
        return lambda a, b: log_euclidean_distance(a.weights, b.weights)
    if method == "gh":
        return gh_distance
    if method == "ks":
        return lambda a, b: ks_distance(a, b, dim, convention)
    if method == "bottleneck":
        def bn(a, b):
            d1, d2 = _graph_diagrams(a, b, dim, convention)
            return bottleneck(d1, d2)
        return bn
    if method == "wasserstein":
        def ws(a, b):
            d1, d2 = _graph_diagrams(a, b, dim, convention)
            return wasserstein(d1, d2, q)
        return ws
    raise DataError(f"unknown distance method {method!r}")


def handle_permutation(req: m.PermutationRequest) -> m.PermutationResponse:
    fn = _distance_fn(req.method, req.dim, req.order, req.q, req.convention)
    problem = TwoSampleProblem(
        tuple(_network(x) for x in req.group1),
        tuple(_network(x) for x in req.group2),
        fn,
    )
    res = permutation_test(problem, req.n_perm, req.seed)
    return m.PermutationResponse(observed=res.observed, p=res.p_value,
                                 n_perm=res.n_perm, seed=res.seed,
                                 null_quantiles=res.null_quantiles())


def handle_top_loss(req: m.TopLossRequest) -> m.ValueResponse:
    return m.ValueResponse(value=top_loss(_network(req.network1), _network(req.network2)))


def handle_pd_reg(req: m.PdRegRequest) -> m.ValueResponse:
    return m.ValueResponse(value=pd_regularizer(_diagram(req.diagram), req.p, req.q, req.i0))


def handle_regress(req: m.RegressRequest) -> m.RegressResponse:
    problem = RegressionProblem(
        tuple(_network(x) for x in req.observations),
        _network(req.prior),
        req.lam,
        req.max_iter,
        req.step_size,
    )
    res = topo_regression(problem)
    return m.RegressResponse(
        weights=[[float(v) for v in row] for row in res.estimate.weights],
        trace=[float(v) for v in res.trace],
        converged=res.converged,
    )


def _complex_response(cx, betti: bool, landmarks=None) -> m.ComplexResponse:
    simplices = [m.SimplexPayload(dim=len(s) - 1, vertices=list(s), time=0.0)
                 for s in cx.all_simplices()]
    betti_nums = None
    if betti:
        betti_nums = [betti_via_rank(cx, k) for k in range(max(cx.dim, 1) + 1)]
    return m.ComplexResponse(simplices=simplices, betti=betti_nums, landmarks=landmarks)


def handle_rips(req: m.RipsRequest) -> m.ComplexResponse:
    if (req.points is None) == (req.network is None):
        raise DataError("give exactly one of points or network")
    if req.points is not None:
        source = PointCloud(np.asarray(req.points, dtype=float))
    else:
        source = _network(req.network)
    cx = rips_complex(source, req.eps, req.max_dim)
    return _complex_response(cx, req.betti)


def handle_witness(req: m.WitnessRequest) -> m.ComplexResponse:
    cloud = PointCloud(np.asarray(req.points, dtype=float))
    if req.landmarks is not None:
        landmarks = [int(v) for v in req.landmarks]
    else:
        count = req.landmark_count or max(1, cloud.n // 10)
        landmarks = maxmin_landmarks(cloud, count, req.seed)
    cx = witness_complex(cloud, landmarks, req.eps, req.max_dim)
    return _complex_response(cx, req.betti, landmarks=landmarks)


app = FastAPI(title="toponet", description="Topological representations and "
              "distances for weighted networks", version=__version__)


def _wrap(handler, req):
    try:
        return handler(req)
    except DataError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.get("/health", response_model=m.HealthResponse)
def health() -> m.HealthResponse:
    return m.HealthResponse(status="ok", version=__version__)


@app.post("/network/from-correlation", response_model=m.NetworkPayload)
def corr_endpoint(req: m.CorrelationRequest):
    return _wrap(handle_corr_to_weight, req)


@app.post("/betti", response_model=m.BettiResponse)
def betti_endpoint(req: m.BettiRequest):
    return _wrap(handle_betti, req)


@app.post("/pd", response_model=m.PdResponse)
def pd_endpoint(req: m.PdRequest):
    return _wrap(handle_pd, req)


@app.post("/morse", response_model=m.DiagramPayload)
def morse_endpoint(req: m.MorseRequest):
    return _wrap(handle_morse, req)


@app.post("/summary/apf", response_model=m.ValueResponse)
def apf_endpoint(req: m.ApfRequest):
    return _wrap(handle_apf, req)


@app.post("/summary/entropy", response_model=m.ValueResponse)
def entropy_endpoint(req: m.EntropyRequest):
    return _wrap(handle_entropy, req)


@app.post("/summary/landscape", response_model=m.LandscapeResponse)
def landscape_endpoint(req: m.LandscapeRequest):
    return _wrap(handle_landscape, req)


@app.post("/summary/image", response_model=m.ImageResponse)
def image_endpoint(req: m.ImageRequest):
    return _wrap(handle_image, req)


@app.post("/distance", response_model=m.ValueResponse)
def distance_endpoint(req: m.DistanceRequest):
    return _wrap(handle_distance, req)


@app.post("/distance/matrix", response_model=m.PairwiseDistanceResponse)
def pairwise_endpoint(req: m.PairwiseDistanceRequest):
    return _wrap(handle_pairwise, req)


@app.post("/inference/ks", response_model=m.ValueResponse)
def ks_infer_endpoint(req: m.KsInferRequest):
    return _wrap(handle_ks_infer, req)


@app.post("/inference/permutation", response_model=m.PermutationResponse)
def permutation_endpoint(req: m.PermutationRequest):
    return _wrap(handle_permutation, req)


@app.post("/loss/top", response_model=m.ValueResponse)
def top_loss_endpoint(req: m.TopLossRequest):
    return _wrap(handle_top_loss, req)


@app.post("/loss/pdreg", response_model=m.ValueResponse)
def pd_reg_endpoint(req: m.PdRegRequest):
    return _wrap(handle_pd_reg, req)


@app.post("/regress", response_model=m.RegressResponse)
def regress_endpoint(req: m.RegressRequest):
    return _wrap(handle_regress, req)


@app.post("/complex/rips", response_model=m.ComplexResponse)
def rips_endpoint(req: m.RipsRequest):
    return _wrap(handle_rips, req)


@app.post("/complex/witness", response_model=m.ComplexResponse)
def witness_endpoint(req: m.WitnessRequest):
    return _wrap(handle_witness, req)
