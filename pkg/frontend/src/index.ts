export { BoundNetwork, asBoundNetwork, sharedDeathLevel } from "./network";
export { ToponetClient, ServiceError, bindAll, BoundFunctions } from "./client";
export * from "./types";
