// Shared test stand-ins: a scripted fetch and a tiny fake advisory server
// exposing the same version/delta behavior as the real one.

import { AdvisoryApi, type KbDelta, type KbEntryDoc } from "../src/api.js";

export interface FakeServerKb {
  version: number;
  entries: Record<string, KbEntryDoc>;
}

export function makeEntry(slug: string, version: number): KbEntryDoc {
  return {
    name_ne: `ने-${slug}-${version}`,
    name_en: `${slug} v${version}`,
    symptoms: [`symptom of ${slug} as of v${version}`],
    prevention: [`prevention for ${slug} as of v${version}`],
    remedy: [`remedy for ${slug} as of v${version}`],
    last_modified_version: version,
  };
}

export function serverDelta(server: FakeServerKb, since: number): KbDelta {
  const entries: Record<string, KbEntryDoc> = {};
  for (const [slug, entry] of Object.entries(server.entries)) {
    if (entry.last_modified_version > since) entries[slug] = entry;
  }
  return { since, to: server.version, entries };
}

export interface ScriptedCall {
  url: string;
  method: string;
  body?: unknown;
}

/** An AdvisoryApi whose fetch is served by `handle`; records every call. */
export function scriptedApi(
  handle: (url: string, init?: RequestInit) => Response | Promise<Response>,
  calls: ScriptedCall[] = [],
): { api: AdvisoryApi; calls: ScriptedCall[] } {
  const fetchFn = async (url: string, init?: RequestInit) => {
    calls.push({ url, method: init?.method ?? "GET" });
    return handle(url, init);
  };
  return { api: new AdvisoryApi("", fetchFn), calls };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function errorResponse(status: number, code: string, message: string): Response {
  return jsonResponse({ error: { code, message } }, status);
}

/** Serve the fake server's version/delta endpoints; throw elsewhere. */
export function kbApi(server: FakeServerKb): { api: AdvisoryApi; calls: ScriptedCall[] } {
  return scriptedApi((url) => {
    if (url.includes("/kb/version")) return jsonResponse({ version: server.version });
    const match = url.match(/\/kb\/delta\?since=(\d+)/);
    if (match) return jsonResponse(serverDelta(server, Number(match[1])));
    throw new TypeError(`unexpected request ${url}`);
  });
}

/** Deterministic xorshift so randomized tests replay identically. */
export function makeRng(seed: number): () => number {
  let state = seed >>> 0 || 1;
  return () => {
    state ^= state << 13;
    state >>>= 0;
    state ^= state >> 17;
    state ^= state << 5;
    state >>>= 0;
    return state / 0x100000000;
  };
}
