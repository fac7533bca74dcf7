import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, ConnectionError, resolveBaseUrl } from "../src/api.js";
import { fixtureRaw, fetchStub } from "./helpers.js";

describe("ApiClient", () => {
  it("returns parsed documents together with the raw bytes", async () => {
    const body = fixtureRaw("analyze.json");
    const stub = fetchStub({ "POST /v1/maps/m1/analyze": { body } });
    const api = new ApiClient("", stub);
    const result = await api.analyze("m1");
    expect(result.raw).toBe(body);
    expect(result.doc.stability.classification).toBe("stable");
  });

  it("surfaces the server error envelope", async () => {
    const body = fixtureRaw("error_bad_factor.json");
    const stub = fetchStub({ "POST /v1/maps/m1/simulate": { body, status: 400 } });
    const api = new ApiClient("", stub);
    const failure = api.simulate("m1", { schedule: { "0": { q: 1 } }, horizon: 2 });
    await expect(failure).rejects.toBeInstanceOf(ApiError);
    await expect(failure.catch((e) => e)).resolves.toMatchObject({
      code: "bad-scenario",
      status: 400,
    });
  });

  it("wraps network failures as ConnectionError", async () => {
    const failing = (async () => {
      throw new TypeError("fetch failed");
    }) as unknown as typeof fetch;
    const api = new ApiClient("http://localhost:9", failing);
    await expect(api.listMaps()).rejects.toBeInstanceOf(ConnectionError);
  });

  it("aborts the previous simulate when a new one is submitted", async () => {
    const signals: AbortSignal[] = [];
    let resolvers: ((r: Response) => void)[] = [];
    const hanging = ((input: RequestInfo | URL, init?: RequestInit) => {
      signals.push(init!.signal!);
      return new Promise<Response>((resolve, reject) => {
        init!.signal!.addEventListener("abort", () =>
          reject(new DOMException("The operation was aborted.", "AbortError")),
        );
        resolvers.push(resolve);
      });
    }) as unknown as typeof fetch;
    const api = new ApiClient("", hanging);
    const first = api.simulate("m1", { schedule: {}, horizon: 1 });
    const second = api.simulate("m1", { schedule: {}, horizon: 2 });
    expect(signals[0].aborted).toBe(true);
    expect(signals[1].aborted).toBe(false);
    await expect(first).rejects.toHaveProperty("name", "AbortError");
    resolvers[1](
      new Response(fixtureRaw("simulate_p1_t2.json"), {
        headers: { "content-type": "application/json" },
      }),
    );
    const result = await second;
    expect(result.doc.horizon).toBe(2);
  });
});

describe("resolveBaseUrl", () => {
  it("prefers the api query parameter", () => {
    const location = { search: "?api=http://localhost:8000/" } as Location;
    expect(resolveBaseUrl(location)).toBe("http://localhost:8000");
  });

  it("falls back to same origin", () => {
    expect(resolveBaseUrl({ search: "" } as Location)).toBe("");
  });
});
