import { describe, expect, it } from "vitest";

import { ApiClient, ServiceError } from "../src/api.js";
import { toConfigFragment, DEFAULT_PARAMS } from "../src/config.js";

describe("ApiClient", () => {
  it("compensate posts schema keys and returns bytes plus echo", async () => {
    let captured: { url: string; init?: RequestInit } | null = null;
    const client = new ApiClient("http://svc", async (url, init) => {
      captured = { url, init };
      return new Response(new Uint8Array([1, 2, 3]).buffer, {
        headers: { "X-Resolved-Config": JSON.stringify({ model: "hartline-ratliff" }) },
      });
    });
    const result = await client.compensate("stripes", 64, 48, toConfigFragment(DEFAULT_PARAMS));
    expect(captured!.url).toBe("http://svc/api/compensate");
    const body = JSON.parse(captured!.init!.body as string);
    expect(body.pattern).toBe("stripes");
    expect(body.width).toBe(64);
    expect(body.height).toBe(48);
    expect(body.viewing).toEqual({ distance_in: 30, density_ppi: 94 });
    expect(body.inhibition.alpha).toBe(0.037);
    expect(Array.from(result.png)).toEqual([1, 2, 3]);
    expect(result.resolved).toEqual({ model: "hartline-ratliff" });
  });

  it("maps error bodies onto ServiceError", async () => {
    const client = new ApiClient("http://svc", async () =>
      new Response(JSON.stringify({ error: "NoConvergence", message: "residual too big" }), {
        status: 422,
      }),
    );
    await expect(client.patterns()).rejects.toThrowError(ServiceError);
    await expect(client.patterns()).rejects.toMatchObject({
      status: 422,
      category: "NoConvergence",
    });
  });

  it("fetches defaults with geometry query parameters", async () => {
    let seen = "";
    const client = new ApiClient("http://svc", async (url) => {
      seen = url;
      return new Response(JSON.stringify({ inhibition: { alpha: 0.037 } }));
    });
    const defaults = await client.defaults(30, 94);
    expect(seen).toBe("http://svc/api/defaults?distance_in=30&density_ppi=94");
    expect((defaults.inhibition as { alpha: number }).alpha).toBe(0.037);
  });
});
