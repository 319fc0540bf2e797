/* tslint:disable */
/* eslint-disable */

/**
 * Bundled diagrams as a JSON array.
 */
export function corpus(): string;

/**
 * Formal cube, square signs and comparison isomorphism as JSON.
 */
export function cube(pd: string): string;

/**
 * Homology JSON; `variant` is `even`, `odd` or `both`, `pipeline` is `sl2` or `gl2`.
 */
export function homology(pd: string, variant: string, pipeline: string): string;

/**
 * Jones polynomial and Euler characteristics as JSON.
 */
export function jones(pd: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly corpus: () => [number, number];
    readonly cube: (a: number, b: number) => [number, number, number, number];
    readonly homology: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly jones: (a: number, b: number) => [number, number, number, number];
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
