/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_simulation_free: (a: number, b: number) => void;
export const simulation_defect_count: (a: number) => number;
export const simulation_directors: (a: number) => [number, number];
export const simulation_energy: (a: number) => number;
export const simulation_lambda_plus: (a: number) => [number, number];
export const simulation_melt: (a: number, b: number, c: number, d: number) => void;
export const simulation_nematic_order: (a: number) => number;
export const simulation_new: (a: number, b: number, c: number) => [number, number, number];
export const simulation_nodes: (a: number) => [number, number];
export const simulation_reset: (a: number, b: number, c: number) => [number, number];
export const simulation_set_dt: (a: number, b: number) => [number, number];
export const simulation_step: (a: number, b: number) => [number, number, number];
export const simulation_time: (a: number) => number;
export const simulation_triangles: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
