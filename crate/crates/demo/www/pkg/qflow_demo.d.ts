/* tslint:disable */
/* eslint-disable */

export class Simulation {
    free(): void;
    [Symbol.dispose](): void;
    defect_count(): number;
    /**
     * Unit directors as `[dx0, dy0, ...]`.
     */
    directors(): Float64Array;
    energy(): number;
    lambda_plus(): Float64Array;
    /**
     * Sets the interior field to zero within `radius` of `(x, y)`.
     */
    melt(x: number, y: number, radius: number): void;
    /**
     * Largest scalar order parameter of the bulk nematic state, for the
     * colour scale.
     */
    nematic_order(): number;
    constructor(kind: string, dt: number);
    /**
     * Node coordinates as `[x0, y0, x1, y1, ...]`.
     */
    nodes(): Float64Array;
    /**
     * Restarts from the initial state of `kind`.
     */
    reset(kind: string): void;
    set_dt(dt: number): void;
    /**
     * Advances `n` steps and returns the total fixed-point iterations.
     */
    step(n: number): number;
    time(): number;
    triangles(): Uint32Array;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_simulation_free: (a: number, b: number) => void;
    readonly simulation_defect_count: (a: number) => number;
    readonly simulation_directors: (a: number) => [number, number];
    readonly simulation_energy: (a: number) => number;
    readonly simulation_lambda_plus: (a: number) => [number, number];
    readonly simulation_melt: (a: number, b: number, c: number, d: number) => void;
    readonly simulation_nematic_order: (a: number) => number;
    readonly simulation_new: (a: number, b: number, c: number) => [number, number, number];
    readonly simulation_nodes: (a: number) => [number, number];
    readonly simulation_reset: (a: number, b: number, c: number) => [number, number];
    readonly simulation_set_dt: (a: number, b: number) => [number, number];
    readonly simulation_step: (a: number, b: number) => [number, number, number];
    readonly simulation_time: (a: number) => number;
    readonly simulation_triangles: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
