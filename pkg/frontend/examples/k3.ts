/**
 * Walk through the 3-node worked example against a running service:
 *
 *   uvicorn toponet.service.app:app --port 8000   (in the repo root)
 *   npm run example
 */
import { bindAll, ToponetClient } from "../src";

async function main() {
  const client = new ToponetClient(process.env.TOPONET_URL ?? "http://127.0.0.1:8000");
  const fns = bindAll(client);

  // triangle with edge weights 0.2, 0.3, 0.4
  const k3 = [
    [0.0, 0.2, 0.3],
    [0.2, 0.0, 0.4],
    [0.3, 0.4, 0.0],
  ];

  const beta0 = await fns.bettiCurve(k3, 0);
  console.log("beta0 breakpoints:", beta0.breakpoints); // [0.3, 0.4]
  console.log("beta0 values:", beta0.values); // [1, 2, 3]

  const beta1 = await fns.bettiCurve(k3, 1);
  console.log("beta1 values:", beta1.values); // [1, 0]

  const barcode = await fns.graphBarcode(k3);
  console.log("component births I0:", barcode.births0); // [0.3, 0.4]
  console.log("cycle deaths I1:", barcode.deaths1); // [0.2]

  console.log("KS distance to itself:", await fns.ksDistance(k3, k3, 0)); // 0

  const shifted = [
    [0.0, 0.2, 0.3],
    [0.2, 0.0, 0.5],
    [0.3, 0.5, 0.0],
  ];
  console.log("top loss vs shifted triangle:", await fns.topLoss(k3, shifted));

  console.log("exact p-value at Dq=8, q=8:", await fns.ksPvalue(8, 8));

  const bars: [number, number][] = [
    [0, 2],
    [1, 3],
    [2, 4],
  ];
  console.log("entropy of three equal bars (ln 3):", await fns.entropy(bars));
}

main().catch((err) => {
  console.error(err);
  process.exit(1);
});
