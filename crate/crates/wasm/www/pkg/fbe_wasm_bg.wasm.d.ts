/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_enhanceresult_free: (a: number, b: number) => void;
export const __wbg_equalizerdesign_free: (a: number, b: number) => void;
export const design_equalizer: (a: number, b: number, c: number) => [number, number, number];
export const enhance_synthetic: (a: number, b: number, c: number, d: bigint) => [number, number, number];
export const enhanceresult_enhanced: (a: number) => [number, number];
export const enhanceresult_group_delay_ms: (a: number) => number;
export const enhanceresult_noisy: (a: number) => [number, number];
export const enhanceresult_sample_rate: (a: number) => number;
export const enhanceresult_seg_na_db: (a: number) => number;
export const enhanceresult_seg_snr_in_db: (a: number) => number;
export const enhanceresult_seg_snr_out_db: (a: number) => number;
export const equalizerdesign_group_delay_ms: (a: number) => number;
export const equalizerdesign_response_db: (a: number) => [number, number];
export const equalizerdesign_taps: (a: number) => [number, number];
export const equalizerdesign_target_db: (a: number) => [number, number];
export const prototype_response: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
