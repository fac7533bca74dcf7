import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { Raw } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

export function fixtureRaw(name: string): string {
  return readFileSync(join(here, "fixtures", name), "utf-8");
}

export function fixture<T>(name: string): Raw<T> {
  const raw = fixtureRaw(name);
  return { doc: JSON.parse(raw) as T, raw };
}

/** Minimal Response-producing fetch stub keyed by "METHOD path". */
export function fetchStub(
  routes: Record<string, { status?: number; body: string }>,
): typeof fetch & { calls: { url: string; init?: RequestInit }[] } {
  const calls: { url: string; init?: RequestInit }[] = [];
  const stub = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    calls.push({ url, init });
    if (init?.signal?.aborted) {
      throw new DOMException("The operation was aborted.", "AbortError");
    }
    const method = init?.method ?? "GET";
    const key = `${method} ${url}`;
    const route = routes[key];
    if (!route) throw new TypeError(`fetch stub: no route for ${key}`);
    return new Response(route.body, {
      status: route.status ?? 200,
      headers: { "content-type": "application/json" },
    });
  }) as unknown as typeof fetch & { calls: { url: string; init?: RequestInit }[] };
  (stub as { calls: unknown }).calls = calls;
  return stub;
}
