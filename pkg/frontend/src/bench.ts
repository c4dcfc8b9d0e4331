/**
 * Bench controller: wires slider commits to debounced service calls and the
 * preview swap. Pure logic, no DOM; the page supplies a BenchView.
 */

import { ApiClient, ServiceError } from "./api.js";
import { BenchParams } from "./config.js";
import { Debounced, debounce } from "./debounce.js";
import { CalibrationSession } from "./session.js";

export const DEBOUNCE_MS = 150;

export interface BenchView {
  /** Original pattern bytes exactly as served. */
  showOriginal(png: Uint8Array): void;
  /** Compensated preview bytes exactly as served. */
  showCompensated(png: Uint8Array): void;
  showResolved(resolved: Record<string, unknown>): void;
  /** Service-reported problem; the preview keeps the last good image. */
  showError(message: string): void;
}

export class BenchController {
  readonly width: number;
  readonly height: number;
  private readonly trigger: Debounced<[]>;
  private issued = 0;
  private applied = 0;
  private inflight: Promise<void> = Promise.resolve();

  constructor(
    private readonly client: ApiClient,
    readonly session: CalibrationSession,
    private readonly view: BenchView,
    options: { width?: number; height?: number; debounceMs?: number } = {},
  ) {
    this.width = options.width ?? 512;
    this.height = options.height ?? 512;
    this.trigger = debounce(() => {
      this.inflight = this.issue();
    }, options.debounceMs ?? DEBOUNCE_MS);
  }

  /** Requests issued so far (test hook for the debounce contract). */
  get requestCount(): number {
    return this.issued;
  }

  /** Commit a slider change and schedule one debounced preview refresh. */
  onParamChange(change: Partial<BenchParams>): void {
    this.session.commit(change);
    this.trigger();
  }

  /** Load a pattern: original image plus an immediate compensate call. */
  async selectPattern(name: string): Promise<void> {
    this.session.pattern = name;
    try {
      this.view.showOriginal(await this.client.patternImage(name, this.width, this.height));
    } catch (err) {
      this.view.showError(describe(err));
      return;
    }
    this.trigger.cancel();
    await this.issue();
  }

  /** Fire any pending debounced request now and wait for it (tests). */
  async settle(): Promise<void> {
    this.trigger.flush();
    await this.inflight;
  }

  private async issue(): Promise<void> {
    const seq = ++this.issued;
    try {
      const result = await this.client.compensate(
        this.session.pattern,
        this.width,
        this.height,
        this.session.overrides(),
      );
      if (seq <= this.applied) {
        return; // superseded by a newer response; discard
      }
      this.applied = seq;
      this.view.showCompensated(result.png);
      this.view.showResolved(result.resolved);
    } catch (err) {
      this.view.showError(describe(err));
    }
  }
}

function describe(err: unknown): string {
  if (err instanceof ServiceError) {
    return `${err.category}: ${err.message}`;
  }
  return err instanceof Error ? err.message : String(err);
}
