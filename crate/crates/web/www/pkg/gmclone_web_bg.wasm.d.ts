/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const amplitudes: (a: number, b: number, c: number) => [number, number];
export const bond_profile: (a: number, b: number) => [number, number];
export const fidelities: (a: number, b: number, c: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
