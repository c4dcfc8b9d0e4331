/**
 * Calibration session state: current parameters, an append-only history of
 * committed changes, and export/import in the pipeline's config-fragment
 * schema (session bookkeeping rides along under "meta").
 */

import {
  BenchParams,
  ConfigFragment,
  DEFAULT_PARAMS,
  ScaleControl,
  derivedSigma,
  toConfigFragment,
} from "./config.js";

export interface HistoryEntry {
  timestamp: string;
  params: BenchParams;
}

export interface SessionExport extends ConfigFragment {
  meta: {
    tool: string;
    pattern: string;
    brightness_note: string;
    scale_control: ScaleControl;
    chosen: BenchParams;
    history: HistoryEntry[];
  };
}

export class CalibrationSession {
  pattern = "stripes";
  brightnessNote = "";
  private current: BenchParams;
  private readonly history_: HistoryEntry[] = [];

  constructor(
    initial: BenchParams = DEFAULT_PARAMS,
    private readonly now: () => Date = () => new Date(),
  ) {
    this.current = { ...initial };
  }

  get params(): BenchParams {
    return { ...this.current };
  }

  get history(): readonly HistoryEntry[] {
    return this.history_;
  }

  /** Commit a parameter change; every commit appends to the history. */
  commit(change: Partial<BenchParams>): BenchParams {
    this.current = { ...this.current, ...change };
    this.history_.push({
      timestamp: this.now().toISOString(),
      params: { ...this.current },
    });
    return this.params;
  }

  sigmaPx(): number {
    return derivedSigma(this.current);
  }

  /** Config fragment for the current slider state (used for requests). */
  overrides(): ConfigFragment {
    return toConfigFragment(this.current);
  }

  /** Exportable document; also a valid pipeline config fragment. */
  exportSession(): SessionExport {
    return {
      ...toConfigFragment(this.current),
      meta: {
        tool: "latcomp-calibration-ui",
        pattern: this.pattern,
        brightness_note: this.brightnessNote,
        scale_control: this.current.scaleControl,
        chosen: { ...this.current },
        history: this.history_.map((entry) => ({
          timestamp: entry.timestamp,
          params: { ...entry.params },
        })),
      },
    };
  }

  /** Rebuild a session from an exported document. */
  static importSession(doc: SessionExport): CalibrationSession {
    if (!doc.meta || !doc.meta.chosen) {
      throw new Error("not a calibration session export: missing meta.chosen");
    }
    const session = new CalibrationSession({ ...doc.meta.chosen });
    session.pattern = doc.meta.pattern;
    session.brightnessNote = doc.meta.brightness_note ?? "";
    for (const entry of doc.meta.history ?? []) {
      session.history_.push({
        timestamp: entry.timestamp,
        params: { ...entry.params },
      });
    }
    return session;
  }
}
