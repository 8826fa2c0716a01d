import { Convention, Interval } from "./types";

const SYMMETRY_TOL = 1e-12;

/**
 * Immutable handle to a weighted network built from a caller-provided 2-d
 * array.  Validation matches the service loader: square, finite, symmetric
 * within 1e-12, zero diagonal, nonnegative.  The input is copied, never
 * aliased or mutated.
 */
export class BoundNetwork {
  readonly weights: ReadonlyArray<ReadonlyArray<number>>;
  readonly convention: Convention;

  constructor(weights: number[][], convention: Convention = "similarity") {
    if (!Array.isArray(weights) || weights.length === 0) {
      throw new TypeError("weights must be a nonempty 2-d array");
    }
    const p = weights.length;
    const copy: number[][] = [];
    for (let i = 0; i < p; i++) {
      const row = weights[i];
      if (!Array.isArray(row) || row.length !== p) {
        throw new RangeError(`weights must be square; row ${i} has length ${row?.length}`);
      }
      const out = new Array<number>(p);
      for (let j = 0; j < p; j++) {
        const v = row[j];
        if (typeof v !== "number" || !Number.isFinite(v)) {
          throw new TypeError(`weights[${i}][${j}] is not a finite number`);
        }
        out[j] = v;
      }
      copy.push(out);
    }
    for (let i = 0; i < p; i++) {
      if (Math.abs(copy[i][i]) > SYMMETRY_TOL) {
        throw new RangeError(`diagonal entry (${i}, ${i}) must be zero`);
      }
      copy[i][i] = 0;
      for (let j = i + 1; j < p; j++) {
        if (Math.abs(copy[i][j] - copy[j][i]) > SYMMETRY_TOL) {
          throw new RangeError(`weights asymmetric at (${i}, ${j})`);
        }
        if (copy[i][j] < 0) {
          throw new RangeError(`negative weight at (${i}, ${j})`);
        }
        copy[j][i] = copy[i][j];
      }
    }
    this.weights = copy.map((row) => Object.freeze(row.slice()));
    Object.freeze(this.weights);
    this.convention = convention;
  }

  get p(): number {
    return this.weights.length;
  }

  /** Plain mutable copy suitable for JSON serialization. */
  toArray(): number[][] {
    return this.weights.map((row) => row.slice());
  }
}

export type NetworkInput = BoundNetwork | number[][];

export function asBoundNetwork(
  net: NetworkInput,
  convention: Convention = "similarity",
): BoundNetwork {
  return net instanceof BoundNetwork ? net : new BoundNetwork(net, convention);
}

/** Validate a bar/diagram point list; returns a defensive copy. */
export function copyIntervals(intervals: Interval[]): Interval[] {
  return intervals.map(([b, d], idx) => {
    if (!Number.isFinite(b) || !Number.isFinite(d)) {
      throw new TypeError(`interval ${idx} must be finite`);
    }
    if (d < b) {
      throw new RangeError(`interval ${idx} has death ${d} before birth ${b}`);
    }
    return [b, d] as Interval;
  });
}

/**
 * Death level used when component classes need a finite close: just past the
 * largest weight, scaled by the weight range (mirrors the service rule).
 */
export function sharedDeathLevel(weights: number[]): number {
  if (weights.length === 0) return 1.0;
  let lo = weights[0];
  let hi = weights[0];
  for (const w of weights) {
    if (w < lo) lo = w;
    if (w > hi) hi = w;
  }
  return hi > lo ? hi + 0.01 * (hi - lo) : hi + 1.0;
}
