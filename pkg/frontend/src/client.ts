import { asBoundNetwork, BoundNetwork, copyIntervals, NetworkInput } from "./network";
import {
  BettiCurve,
  Convention,
  DiagramPayload,
  DistanceMethod,
  GraphBarcode,
  ImageGrid,
  ImageWeight,
  Interval,
  NetworkPayload,
  PermutationOptions,
  PermutationResult,
  PersistenceImage,
  PvalueMode,
  ThresholdMode,
} from "./types";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
    path: string,
  ) {
    super(`${path} failed (${status}): ${detail}`);
    this.name = "ServiceError";
  }
}

function payload(net: NetworkInput, convention: Convention): NetworkPayload {
  const bound = asBoundNetwork(net, convention);
  return { weights: bound.toArray(), convention: bound.convention };
}

function diagram(points: Interval[], dim = 0): DiagramPayload {
  return { dim, points: copyIntervals(points) };
}

/** HTTP client for a running toponet service. */
export class ToponetClient {
  constructor(readonly baseUrl: string = "http://127.0.0.1:8000") {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl.replace(/\/$/, "") + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const parsed = (await resp.json()) as { detail?: unknown };
        if (parsed.detail !== undefined) detail = JSON.stringify(parsed.detail);
      } catch {
        /* non-JSON error body */
      }
      throw new ServiceError(resp.status, detail, path);
    }
    return (await resp.json()) as T;
  }

  async health(): Promise<{ status: string; version: string }> {
    const resp = await fetch(this.baseUrl.replace(/\/$/, "") + "/health");
    if (!resp.ok) throw new ServiceError(resp.status, resp.statusText, "/health");
    return (await resp.json()) as { status: string; version: string };
  }

  /** Dissimilarity network sqrt(1 - corr) from a correlation matrix. */
  async corrToWeight(corr: number[][]): Promise<BoundNetwork> {
    const resp = await this.post<NetworkPayload>("/network/from-correlation", {
      corr: corr.map((row) => row.slice()),
    });
    return new BoundNetwork(resp.weights, resp.convention);
  }

  async bettiCurve(
    net: NetworkInput,
    dim: 0 | 1,
    convention: ThresholdMode = "above",
  ): Promise<BettiCurve> {
    return this.post<BettiCurve>("/betti", {
      network: payload(net, "similarity"),
      dim,
      convention,
    });
  }

  async graphBarcode(
    net: NetworkInput,
    options: { deathLevel?: number; convention?: ThresholdMode } = {},
  ): Promise<GraphBarcode> {
    return this.post<GraphBarcode>("/pd", {
      network: payload(net, "similarity"),
      death_level: options.deathLevel ?? null,
      convention: options.convention ?? "above",
    });
  }

  private async matchingDistance(
    method: "bottleneck" | "wasserstein",
    d1: Interval[],
    d2: Interval[],
    q: number,
  ): Promise<number> {
    const resp = await this.post<{ value: number }>("/distance", {
      method,
      diagrams: [diagram(d1), diagram(d2)],
      q,
    });
    return resp.value;
  }

  async bottleneck(d1: Interval[], d2: Interval[]): Promise<number> {
    return this.matchingDistance("bottleneck", d1, d2, 2.0);
  }

  async wasserstein(d1: Interval[], d2: Interval[], q = 2.0): Promise<number> {
    return this.matchingDistance("wasserstein", d1, d2, q);
  }

  private async networkDistance(
    method: DistanceMethod,
    n1: NetworkInput,
    n2: NetworkInput,
    extra: Record<string, unknown> = {},
  ): Promise<number> {
    const resp = await this.post<{ value: number }>("/distance", {
      method,
      networks: [payload(n1, "similarity"), payload(n2, "similarity")],
      ...extra,
    });
    return resp.value;
  }

  async ghDistance(n1: NetworkInput, n2: NetworkInput): Promise<number> {
    return this.networkDistance("gh", n1, n2);
  }

  async ksDistance(
    n1: NetworkInput,
    n2: NetworkInput,
    dim: 0 | 1,
    convention: ThresholdMode = "above",
  ): Promise<number> {
    return this.networkDistance("ks", n1, n2, { dim, convention });
  }

  async ksPvalue(dq: number, q: number, mode: PvalueMode = "continuous"): Promise<number> {
    const resp = await this.post<{ value: number }>("/inference/ks", { dq, q, mode });
    return resp.value;
  }

  async permutationTest(
    group1: NetworkInput[],
    group2: NetworkInput[],
    options: PermutationOptions = {},
  ): Promise<PermutationResult> {
    return this.post<PermutationResult>("/inference/permutation", {
      group1: group1.map((n) => payload(n, "similarity")),
      group2: group2.map((n) => payload(n, "similarity")),
      method: options.method ?? "ks",
      dim: options.dim ?? 0,
      order: options.order ?? 2.0,
      q: options.q ?? 2.0,
      convention: options.convention ?? "above",
      n_perm: options.nPerm ?? 999,
      seed: options.seed ?? 0,
    });
  }

  async topLoss(n1: NetworkInput, n2: NetworkInput): Promise<number> {
    const resp = await this.post<{ value: number }>("/loss/top", {
      network1: payload(n1, "similarity"),
      network2: payload(n2, "similarity"),
    });
    return resp.value;
  }

  async persistenceImage(
    points: Interval[],
    grid: ImageGrid,
    sigma: number,
    weight: ImageWeight = "uniform",
    normalize = false,
  ): Promise<PersistenceImage> {
    return this.post<PersistenceImage>("/summary/image", {
      diagram: diagram(points),
      grid,
      sigma,
      weight,
      normalize,
    });
  }

  async landscape(bars: Interval[], k: number, eps: number): Promise<number> {
    const resp = await this.post<{ values: number[] }>("/summary/landscape", {
      barcode: diagram(bars),
      k,
      eps,
    });
    return resp.values[0];
  }

  async landscapeCurve(bars: Interval[], k: number, grid: number[]): Promise<number[]> {
    const resp = await this.post<{ values: number[] }>("/summary/landscape", {
      barcode: diagram(bars),
      k,
      grid: grid.slice(),
    });
    return resp.values;
  }

  async entropy(bars: Interval[]): Promise<number> {
    const resp = await this.post<{ value: number }>("/summary/entropy", {
      barcode: diagram(bars),
    });
    return resp.value;
  }

  async apf(bars: Interval[], t: number): Promise<number> {
    const resp = await this.post<{ value: number }>("/summary/apf", {
      barcode: diagram(bars),
      t,
    });
    return resp.value;
  }
}

/**
 * The bound function surface over a client: every call is a pure function of
 * its in-memory arguments, value-equivalent to the core implementation.
 */
export function bindAll(client: ToponetClient) {
  return {
    corrToWeight: client.corrToWeight.bind(client),
    bettiCurve: client.bettiCurve.bind(client),
    graphBarcode: client.graphBarcode.bind(client),
    bottleneck: client.bottleneck.bind(client),
    wasserstein: client.wasserstein.bind(client),
    ghDistance: client.ghDistance.bind(client),
    ksDistance: client.ksDistance.bind(client),
    ksPvalue: client.ksPvalue.bind(client),
    permutationTest: client.permutationTest.bind(client),
    topLoss: client.topLoss.bind(client),
    persistenceImage: client.persistenceImage.bind(client),
    landscape: client.landscape.bind(client),
    entropy: client.entropy.bind(client),
    apf: client.apf.bind(client),
  };
}

export type BoundFunctions = ReturnType<typeof bindAll>;
