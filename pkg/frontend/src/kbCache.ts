// Locally persisted copy of the remedy knowledge base, kept current by
// version probe + delta fetch. Once synced, browsing works fully offline.

import type { AdvisoryApi, KbDelta, KbEntryDoc } from "./api.js";
import { readJson, writeJson, type KeyValueStore } from "./storage.js";

export interface KbDocument {
  version: number;
  entries: Record<string, KbEntryDoc>;
}

export interface SyncResult {
  updated: boolean;
  version: number;
}

/** Merge a server delta into a cached document, yielding the newer document. */
export function applyDelta(doc: KbDocument, delta: KbDelta): KbDocument {
  const entries: Record<string, KbEntryDoc> = { ...doc.entries };
  for (const [slug, entry] of Object.entries(delta.entries)) {
    entries[slug] = entry;
  }
  return { version: delta.to, entries };
}

const EMPTY: KbDocument = { version: 0, entries: {} };

export class KbCache {
  private doc: KbDocument;
  lastSyncMs: number | null = null;

  constructor(
    private readonly store: KeyValueStore,
    private readonly key: string = "tomatodet.kb",
  ) {
    this.doc = readJson<KbDocument>(store, key) ?? EMPTY;
  }

  get version(): number {
    return this.doc.version;
  }

  document(): KbDocument {
    return this.doc;
  }

  entry(slug: string): KbEntryDoc | null {
    return this.doc.entries[slug] ?? null;
  }

  entries(): Array<[string, KbEntryDoc]> {
    return Object.entries(this.doc.entries).sort(([a], [b]) => a.localeCompare(b));
  }

  /**
   * Probe the server version; fetch and apply a delta only when the server
   * is ahead. Any network failure leaves the cache untouched.
   */
  async sync(api: AdvisoryApi): Promise<SyncResult> {
    const serverVersion = await api.kbVersion();
    if (serverVersion <= this.doc.version) {
      this.lastSyncMs = Date.now();
      return { updated: false, version: this.doc.version };
    }
    const delta = await api.kbDelta(this.doc.version);
    this.doc = applyDelta(this.doc, delta);
    writeJson(this.store, this.key, this.doc);
    this.lastSyncMs = Date.now();
    return { updated: true, version: this.doc.version };
  }
}
