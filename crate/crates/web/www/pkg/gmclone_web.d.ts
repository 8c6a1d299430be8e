/* tslint:disable */
/* eslint-disable */

/**
 * Nonzero amplitudes of the output for the Bloch-sphere input `(θ, φ)`.
 */
export function amplitudes(clones: number, theta: number, phi: number): string;

/**
 * Bond dimension and per-cut ranks for `M = 1..=max_clones`.
 */
export function bond_profile(max_clones: number, tol: number): string;

/**
 * Clone and anticlone fidelities plus the nonlinearity gap.
 */
export function fidelities(clones: number, theta: number, phi: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly amplitudes: (a: number, b: number, c: number) => [number, number];
    readonly bond_profile: (a: number, b: number) => [number, number];
    readonly fidelities: (a: number, b: number, c: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
