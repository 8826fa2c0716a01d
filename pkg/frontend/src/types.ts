/** Wire types mirroring the service request/response models. */

export type Convention = "similarity" | "dissimilarity";
export type ThresholdMode = "above" | "below";
export type DistanceMethod =
  | "lp"
  | "logeuclid"
  | "gh"
  | "bottleneck"
  | "wasserstein"
  | "ks";
export type ImageWeight = "uniform" | "linear" | "exponential";
export type PvalueMode = "continuous" | "paper_integer";

export interface NetworkPayload {
  weights: number[][];
  convention: Convention;
}

/** One diagram point or bar as a [birth, death] pair. */
export type Interval = [number, number];

export interface DiagramPayload {
  dim: number;
  points: Interval[];
}

export interface BettiCurve {
  dim: number;
  breakpoints: number[];
  values: number[];
  side: "right" | "left";
}

export interface GraphBarcode {
  births0: number[];
  deaths1: number[];
  death_level: number;
  p: number;
  n_components: number;
}

export interface ImageGrid {
  xmin: number;
  xmax: number;
  nx: number;
  ymin: number;
  ymax: number;
  ny: number;
}

export interface PersistenceImage {
  grid: ImageGrid;
  sigma: number;
  weight: string;
  pixels: number[][];
}

export interface PermutationOptions {
  method?: DistanceMethod;
  dim?: 0 | 1;
  order?: number;
  q?: number;
  convention?: ThresholdMode;
  nPerm?: number;
  seed?: number;
}

export interface PermutationResult {
  observed: number;
  p: number;
  n_perm: number;
  seed: number;
  null_quantiles: Record<string, number>;
}
