/**
 * Thin client for the compensation service. All pixels shown in the bench
 * come through this module untouched; the UI never computes image data
 * itself, which keeps the preview faithful to what the pipeline produced.
 */

import { ConfigFragment } from "./config.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface CompensateResult {
  /** PNG bytes exactly as the service returned them. */
  png: Uint8Array;
  /** Parsed X-Resolved-Config echo. */
  resolved: Record<string, unknown>;
}

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly category: string,
    message: string,
  ) {
    super(message);
  }
}

async function errorFrom(response: Response): Promise<ServiceError> {
  let category = "Error";
  let message = `service responded ${response.status}`;
  try {
    const body = (await response.json()) as { error?: string; message?: string };
    category = body.error ?? category;
    message = body.message ?? message;
  } catch {
    // non-JSON error body; keep the generic message
  }
  return new ServiceError(response.status, category, message);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  async patterns(): Promise<string[]> {
    const r = await this.fetchFn(`${this.baseUrl}/api/patterns`);
    if (!r.ok) throw await errorFrom(r);
    const body = (await r.json()) as { patterns: string[] };
    return body.patterns;
  }

  async defaults(distanceIn: number, densityPpi: number): Promise<Record<string, unknown>> {
    const r = await this.fetchFn(
      `${this.baseUrl}/api/defaults?distance_in=${distanceIn}&density_ppi=${densityPpi}`,
    );
    if (!r.ok) throw await errorFrom(r);
    return (await r.json()) as Record<string, unknown>;
  }

  async patternImage(name: string, width: number, height: number): Promise<Uint8Array> {
    const r = await this.fetchFn(
      `${this.baseUrl}/api/pattern/${encodeURIComponent(name)}?w=${width}&h=${height}`,
    );
    if (!r.ok) throw await errorFrom(r);
    return new Uint8Array(await r.arrayBuffer());
  }

  async compensate(
    pattern: string,
    width: number,
    height: number,
    overrides: ConfigFragment,
  ): Promise<CompensateResult> {
    const r = await this.fetchFn(`${this.baseUrl}/api/compensate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ pattern, width, height, ...overrides }),
    });
    if (!r.ok) throw await errorFrom(r);
    const echo = r.headers.get("X-Resolved-Config");
    return {
      png: new Uint8Array(await r.arrayBuffer()),
      resolved: echo ? (JSON.parse(echo) as Record<string, unknown>) : {},
    };
  }
}
