/**
 * Parameter schema shared with the compensation service. Key names match the
 * pipeline's JSON config file exactly, so session exports double as config
 * fragments.
 */

export type ColorMode = "chromatically-blind" | "channel-independent";
export type ScaleControl = "sigma" | "distance";

export interface ConfigFragment {
  viewing?: { distance_in?: number; density_ppi?: number };
  inhibition?: {
    alpha?: number;
    sigma_px?: number | null;
    beta?: number | null;
    normalization?: string;
  };
  color_mode?: ColorMode;
  meta?: Record<string, unknown>;
}

/** Slider state driving the bench. */
export interface BenchParams {
  alpha: number;
  /** Which control drives the kernel scale. */
  scaleControl: ScaleControl;
  /** Kernel scale in pixels; used when scaleControl is "sigma". */
  sigmaPx: number;
  /** Viewing distance in inches; used when scaleControl is "distance". */
  distanceIn: number;
  densityPpi: number;
  beta: number | null;
  colorMode: ColorMode;
}

export const SIGMA_PER_PPI_INCH = 7.1e-3;

export const ALPHA_RANGE = { min: 0, max: 0.1, step: 0.001 };
export const SIGMA_RANGE = { min: 4, max: 60, step: 0.25 };
export const DISTANCE_RANGE = { min: 6, max: 120, step: 1 };

export const DEFAULT_PARAMS: BenchParams = {
  alpha: 0.037,
  scaleControl: "distance",
  sigmaPx: 20.25,
  distanceIn: 30,
  densityPpi: 94,
  beta: null,
  colorMode: "chromatically-blind",
};

export function derivedSigma(params: BenchParams): number {
  if (params.scaleControl === "sigma") {
    return params.sigmaPx;
  }
  return SIGMA_PER_PPI_INCH * params.densityPpi * params.distanceIn;
}

/** Service-schema overrides for the current slider state. */
export function toConfigFragment(params: BenchParams): ConfigFragment {
  const fragment: ConfigFragment = {
    viewing: { distance_in: params.distanceIn, density_ppi: params.densityPpi },
    inhibition: {
      alpha: params.alpha,
      sigma_px: params.scaleControl === "sigma" ? params.sigmaPx : null,
    },
    color_mode: params.colorMode,
  };
  if (params.beta !== null) {
    fragment.inhibition!.beta = params.beta;
  }
  return fragment;
}
