/* @ts-self-types="./fbe_wasm.d.ts" */

/**
 * Noisy and enhanced versions of a synthetic utterance, plus scores.
 */
export class EnhanceResult {
    static __wrap(ptr) {
        const obj = Object.create(EnhanceResult.prototype);
        obj.__wbg_ptr = ptr;
        EnhanceResultFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        EnhanceResultFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_enhanceresult_free(ptr, 0);
    }
    /**
     * Enhanced output, shifted back by the filter delay to line up with `noisy`.
     * @returns {Float32Array}
     */
    get enhanced() {
        const ret = wasm.enhanceresult_enhanced(this.__wbg_ptr);
        var v1 = getArrayF32FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 4, 4);
        return v1;
    }
    /**
     * @returns {number}
     */
    get group_delay_ms() {
        const ret = wasm.enhanceresult_group_delay_ms(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {Float32Array}
     */
    get noisy() {
        const ret = wasm.enhanceresult_noisy(this.__wbg_ptr);
        var v1 = getArrayF32FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 4, 4);
        return v1;
    }
    /**
     * @returns {number}
     */
    get sample_rate() {
        const ret = wasm.enhanceresult_sample_rate(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * Segmental noise attenuation in speech pauses; NaN if there were none.
     * @returns {number}
     */
    get seg_na_db() {
        const ret = wasm.enhanceresult_seg_na_db(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get seg_snr_in_db() {
        const ret = wasm.enhanceresult_seg_snr_in_db(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get seg_snr_out_db() {
        const ret = wasm.enhanceresult_seg_snr_out_db(this.__wbg_ptr);
        return ret;
    }
}
if (Symbol.dispose) EnhanceResult.prototype[Symbol.dispose] = EnhanceResult.prototype.free;

/**
 * A short equalizer filter and its magnitude response.
 */
export class EqualizerDesign {
    static __wrap(ptr) {
        const obj = Object.create(EqualizerDesign.prototype);
        obj.__wbg_ptr = ptr;
        EqualizerDesignFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        EqualizerDesignFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_equalizerdesign_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get group_delay_ms() {
        const ret = wasm.equalizerdesign_group_delay_ms(this.__wbg_ptr);
        return ret;
    }
    /**
     * Achieved response of the short filter on the same frequency grid.
     * @returns {Float64Array}
     */
    get response_db() {
        const ret = wasm.equalizerdesign_response_db(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get taps() {
        const ret = wasm.equalizerdesign_taps(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * Requested gain per subband, `M/2 + 1` values.
     * @returns {Float64Array}
     */
    get target_db() {
        const ret = wasm.equalizerdesign_target_db(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) EqualizerDesign.prototype[Symbol.dispose] = EqualizerDesign.prototype.free;

/**
 * Builds the `shorten_len`-tap filter for a gain curve given by control points
 * spread evenly from DC to Nyquist (linear interpolation in dB between them).
 * @param {Float64Array} band_gains_db
 * @param {number} shorten_len
 * @returns {EqualizerDesign}
 */
export function design_equalizer(band_gains_db, shorten_len) {
    const ptr0 = passArrayF64ToWasm0(band_gains_db, wasm.__wbindgen_malloc);
    const len0 = WASM_VECTOR_LEN;
    const ret = wasm.design_equalizer(ptr0, len0, shorten_len);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return EqualizerDesign.__wrap(ret[0]);
}

/**
 * Adds white noise at `snr_db` to a synthetic utterance and enhances it with
 * the MMSE-LSA estimator.
 * @param {number} snr_db
 * @param {number} seconds
 * @param {number} shorten_len
 * @param {bigint} seed
 * @returns {EnhanceResult}
 */
export function enhance_synthetic(snr_db, seconds, shorten_len, seed) {
    const ret = wasm.enhance_synthetic(snr_db, seconds, shorten_len, seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return EnhanceResult.__wrap(ret[0]);
}

/**
 * Prototype magnitude response in dB, `nfft / 2 + 1` points from DC to Nyquist.
 * @param {number} frame_size
 * @param {number} proto_len
 * @param {number} hop
 * @param {number} nfft
 * @returns {Float64Array}
 */
export function prototype_response(frame_size, proto_len, hop, nfft) {
    const ret = wasm.prototype_response(frame_size, proto_len, hop, nfft);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg_Error_30c8987f7c2ed4e2: function(arg0, arg1) {
            const ret = Error(getStringFromWasm0(arg0, arg1));
            return ret;
        },
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./fbe_wasm_bg.js": import0,
    };
}

const EnhanceResultFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_enhanceresult_free(ptr, 1));
const EqualizerDesignFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_equalizerdesign_free(ptr, 1));

function getArrayF32FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat32ArrayMemory0().subarray(ptr / 4, ptr / 4 + len);
}

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat32ArrayMemory0 = null;
function getFloat32ArrayMemory0() {
    if (cachedFloat32ArrayMemory0 === null || cachedFloat32ArrayMemory0.byteLength === 0) {
        cachedFloat32ArrayMemory0 = new Float32Array(wasm.memory.buffer);
    }
    return cachedFloat32ArrayMemory0;
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function passArrayF64ToWasm0(arg, malloc) {
    const ptr = malloc(arg.length * 8, 8) >>> 0;
    getFloat64ArrayMemory0().set(arg, ptr / 8);
    WASM_VECTOR_LEN = arg.length;
    return ptr;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let WASM_VECTOR_LEN = 0;

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat32ArrayMemory0 = null;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('fbe_wasm_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
