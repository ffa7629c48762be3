/* tslint:disable */
/* eslint-disable */

/**
 * Noisy and enhanced versions of a synthetic utterance, plus scores.
 */
export class EnhanceResult {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Enhanced output, shifted back by the filter delay to line up with `noisy`.
     */
    readonly enhanced: Float32Array;
    readonly group_delay_ms: number;
    readonly noisy: Float32Array;
    readonly sample_rate: number;
    /**
     * Segmental noise attenuation in speech pauses; NaN if there were none.
     */
    readonly seg_na_db: number;
    readonly seg_snr_in_db: number;
    readonly seg_snr_out_db: number;
}

/**
 * A short equalizer filter and its magnitude response.
 */
export class EqualizerDesign {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly group_delay_ms: number;
    /**
     * Achieved response of the short filter on the same frequency grid.
     */
    readonly response_db: Float64Array;
    readonly taps: Float64Array;
    /**
     * Requested gain per subband, `M/2 + 1` values.
     */
    readonly target_db: Float64Array;
}

/**
 * Builds the `shorten_len`-tap filter for a gain curve given by control points
 * spread evenly from DC to Nyquist (linear interpolation in dB between them).
 */
export function design_equalizer(band_gains_db: Float64Array, shorten_len: number): EqualizerDesign;

/**
 * Adds white noise at `snr_db` to a synthetic utterance and enhances it with
 * the MMSE-LSA estimator.
 */
export function enhance_synthetic(snr_db: number, seconds: number, shorten_len: number, seed: bigint): EnhanceResult;

/**
 * Prototype magnitude response in dB, `nfft / 2 + 1` points from DC to Nyquist.
 */
export function prototype_response(frame_size: number, proto_len: number, hop: number, nfft: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_enhanceresult_free: (a: number, b: number) => void;
    readonly __wbg_equalizerdesign_free: (a: number, b: number) => void;
    readonly design_equalizer: (a: number, b: number, c: number) => [number, number, number];
    readonly enhance_synthetic: (a: number, b: number, c: number, d: bigint) => [number, number, number];
    readonly enhanceresult_enhanced: (a: number) => [number, number];
    readonly enhanceresult_group_delay_ms: (a: number) => number;
    readonly enhanceresult_noisy: (a: number) => [number, number];
    readonly enhanceresult_sample_rate: (a: number) => number;
    readonly enhanceresult_seg_na_db: (a: number) => number;
    readonly enhanceresult_seg_snr_in_db: (a: number) => number;
    readonly enhanceresult_seg_snr_out_db: (a: number) => number;
    readonly equalizerdesign_group_delay_ms: (a: number) => number;
    readonly equalizerdesign_response_db: (a: number) => [number, number];
    readonly equalizerdesign_taps: (a: number) => [number, number];
    readonly equalizerdesign_target_db: (a: number) => [number, number];
    readonly prototype_response: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
